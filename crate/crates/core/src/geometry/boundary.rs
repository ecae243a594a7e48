//! The geometric boundary and the chain-map check δ∘cI = cI∘∂.

use std::fmt;

use super::linalg::{det, minor, sub, unit};
use super::{intersect_cochain, FacetRef, GeoCochain, GraphPiece};
use crate::cochain::{coboundary, IntCochain};
use crate::complex::{CubeId, CubicalComplex};
use crate::cube::{bits, Sign};
use crate::error::GeoError;

/// Which normal of ∂W inside W is placed in front of W's normal frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryConvention {
    /// Pointing into W. With this choice cI is a chain map for the boundary
    /// ∂ = Σ_k (−1)^k (x_k = 1 − x_k = 0) and δα = α∘∂.
    Inward,
    /// Pointing out of W. Yields δ∘cI = −cI∘∂.
    Outward,
}

pub fn boundary_geo(complex: &CubicalComplex, w: &GeoCochain) -> Result<GeoCochain, GeoError> {
    boundary_geo_with(complex, w, BoundaryConvention::Inward)
}

/// Unmatched boundary facets of W, one piece per facet, co-oriented by
/// (normal of the facet in W, W's frame).
pub fn boundary_geo_with(complex: &CubicalComplex, w: &GeoCochain, conv: BoundaryConvention) -> Result<GeoCochain, GeoError> {
    let d = w.ambient();
    let mut pieces = Vec::new();
    for (pi, p) in w.pieces().iter().enumerate() {
        for f in p.boundary_facets() {
            if w.is_matched(&FacetRef { piece: pi, nodes: f.nodes.clone() }) {
                continue;
            }
            pieces.push(facet_piece(p, &f.nodes, f.opposite, conv, d)?);
        }
    }
    let mut out = GeoCochain::new(complex, w.codim() + 1, pieces)?;
    out.time = w.time();
    Ok(out)
}

fn facet_piece(p: &GraphPiece, nodes: &[usize], opposite: usize, conv: BoundaryConvention, d: usize) -> Result<GraphPiece, GeoError> {
    let m = p.dim();
    let pts: Vec<Vec<f64>> = nodes.iter().map(|&k| p.nodes()[k].clone()).collect();
    let tf: Vec<Vec<f64>> = pts[1..].iter().map(|x| sub(x, &pts[0])).collect();
    let mut centroid = vec![0.0; d];
    for x in &pts {
        for (c, v) in centroid.iter_mut().zip(x) {
            *c += v / pts.len() as f64;
        }
    }
    let mut u = sub(&p.nodes()[opposite], &centroid);
    if conv == BoundaryConvention::Outward {
        u.iter_mut().for_each(|x| *x = -*x);
    }
    // Base axes for the facet: the (m−1)-subset of W's base axes on which
    // the facet projects best.
    let base = p.base_axes();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != m - 1 {
            continue;
        }
        let axes: Vec<usize> = bits(mask).map(|b| base[b]).collect();
        let v = det(&minor(&tf, &axes)).abs();
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, axes));
        }
    }
    let (_, axes) = best.expect("m >= 1");
    let comp: Vec<usize> = (0..d).filter(|j| !axes.contains(j)).collect();
    let mut cols = tf.clone();
    cols.push(u);
    let dn = p.frame_det(&cols, None);
    let mut ecols = tf;
    ecols.extend(comp.iter().map(|&j| unit(d, j)));
    let de = det(&ecols);
    let sign = Sign::of_f64(dn)
        .zip(Sign::of_f64(de))
        .map(|(a, b)| a * b)
        .ok_or_else(|| GeoError::Schema("facet is not a graph over a coordinate plane".into()))?;
    let cells = vec![(0..m).collect()];
    GraphPiece::new(p.cube(), d, axes, pts, cells, sign)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainMapReport {
    /// δ(cI(W)).
    pub lhs: IntCochain,
    /// cI(∂W).
    pub rhs: IntCochain,
    /// (cube, lhs value, rhs value) wherever they differ.
    pub mismatches: Vec<(CubeId, i64, i64)>,
}

impl ChainMapReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for ChainMapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return writeln!(f, "chain map identity holds");
        }
        for (c, a, b) in &self.mismatches {
            writeln!(f, "cube {c}: coboundary {a}, boundary {b}")?;
        }
        Ok(())
    }
}

pub fn chain_map_check(complex: &CubicalComplex, w: &GeoCochain) -> Result<ChainMapReport, GeoError> {
    let lhs = coboundary(complex, &intersect_cochain(complex, w)?);
    let rhs = intersect_cochain(complex, &boundary_geo(complex, w)?)?;
    let mut mismatches = Vec::new();
    for &c in complex.cubes_of_dim(w.codim() + 1) {
        if lhs.get(c) != rhs.get(c) {
            mismatches.push((c, lhs.get(c), rhs.get(c)));
        }
    }
    Ok(ChainMapReport { lhs, rhs, mismatches })
}
