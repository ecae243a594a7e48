//! The local model: graph-like pieces through interior points of two
//! complementary faces of the standard cube, flowed towards each other.

use super::{fiber_product_points, ProductConfig};
use crate::complex::CubicalComplex;
use crate::cube::{reciprocal_witness, shuffle_sign, vertex_decomposition, FacePartition, Sign, VertexSet};
use crate::error::GeoError;
use crate::geometry::{intersection_number, GeoCochain, GraphPiece, SignedPointSet};

/// Half-width of the graph-like neighborhoods in the bound directions.
pub const GRAPH_LIKE_R: f64 = 0.3;

/// A flat piece through the centre of `face`, graph over the bound axes of
/// the face on the box of side `r` at the face, co-oriented so that its
/// intersection number with the face is +1.
pub fn graph_like_cochain(complex: &CubicalComplex, face: &FacePartition, r: f64) -> Result<GeoCochain, GeoError> {
    let n = face.n();
    if complex.top_dim() != n || complex.cubes_of_dim(n).len() != 1 {
        return Err(GeoError::Schema("graph-like pieces are built in the standard cube".into()));
    }
    let top = complex.cubes_of_dim(n)[0];
    let bound = face.bound_axes();
    let k = bound.len();
    let centre = face.center();
    let mut nodes = Vec::with_capacity(1 << k);
    for s in 0u32..(1 << k) {
        let mut x = centre.clone();
        for (b, &(j, v)) in bound.iter().enumerate() {
            let far = s & (1 << b) != 0;
            x[j] = match (v == 0.0, far) {
                (true, false) => 0.0,
                (true, true) => r,
                (false, false) => 1.0,
                (false, true) => 1.0 - r,
            };
        }
        nodes.push(x);
    }
    let cells: Vec<Vec<usize>> = match k {
        0 => vec![vec![0]],
        1 => vec![vec![0, 1]],
        2 => vec![vec![0, 1, 3], vec![0, 3, 2]],
        3 => {
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            perms.iter().map(|p| vec![0, 1 << p[0], (1 << p[0]) | (1 << p[1]), 7]).collect()
        }
        _ => return Err(GeoError::UnsupportedDimension(n)),
    };
    let axes: Vec<usize> = bound.iter().map(|&(j, _)| j).collect();
    let piece = GraphPiece::new(top, n, axes, nodes, cells, Sign::Pos)?;
    let w = GeoCochain::new(complex, face.dim(), vec![piece])?;
    let target = complex.face_cube(top, face);
    match intersection_number(complex, &w, target)?.1 {
        1 => Ok(w),
        -1 => Ok(w.reversed()),
        k => Err(GeoError::Schema(format!("graph-like piece meets its face with multiplicity {k}"))),
    }
}

/// f_t(C) ∩ f_{−t}(C′) for compatibly co-oriented graph-like pieces C at
/// `f` and C′ at `g` in the standard n-cube.
pub fn face_pair_test(f: &FacePartition, g: &FacePartition, t: f64, cfg: &ProductConfig) -> Result<SignedPointSet, GeoError> {
    let n = f.n();
    if g.n() != n || f.dim() + g.dim() != n {
        return Err(GeoError::Schema("faces must be complementary in one cube".into()));
    }
    let complex = CubicalComplex::standard_cube(n)?;
    let c = graph_like_cochain(&complex, f, GRAPH_LIKE_R)?;
    let c2 = graph_like_cochain(&complex, g, GRAPH_LIKE_R)?;
    let top = complex.cubes_of_dim(n)[0];
    fiber_product_points(&complex, &c.flowed(t), &c2.flowed(-t), top, cfg)
}

/// The reciprocal pair (v⁻, v⁺).
pub fn reciprocal_unit_test(v: &VertexSet, t: f64, cfg: &ProductConfig) -> Result<SignedPointSet, GeoError> {
    let (minus, plus) = vertex_decomposition(v);
    face_pair_test(&minus, &plus, t, cfg)
}

/// Outcome of a threshold search for one face pair.
#[derive(Clone, Debug, PartialEq)]
pub struct FacePairOutcome {
    pub t: f64,
    pub points: SignedPointSet,
    /// sh of the witness vertex, for reciprocal pairs.
    pub expected: Option<Sign>,
}

/// Least grid t from which every later grid value gives the predicted
/// outcome: one point of sign sh(v) for a reciprocal pair with witness v,
/// no points otherwise. Grid values where the pieces are not yet transverse
/// count as not matching.
pub fn reciprocal_threshold(
    f: &FacePartition,
    g: &FacePartition,
    t_grid: &[f64],
    cfg: &ProductConfig,
) -> Result<Option<FacePairOutcome>, GeoError> {
    let expected = reciprocal_witness(f, g).map(|v| shuffle_sign(&v.as_face()));
    let mut found: Option<FacePairOutcome> = None;
    for &t in t_grid.iter().rev() {
        let points = match face_pair_test(f, g, t, cfg) {
            Ok(p) => p,
            Err(GeoError::Degenerate { .. }) | Err(GeoError::InconsistentSigns { .. }) | Err(GeoError::RootFinder(_)) => break,
            Err(e) => return Err(e),
        };
        let ok = match expected {
            Some(s) => points.len() == 1 && points.points[0].sign == s,
            None => points.is_empty(),
        };
        if !ok {
            break;
        }
        found = Some(FacePairOutcome { t, points, expected });
    }
    Ok(found)
}
