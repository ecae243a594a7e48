//! Geometric cochains: co-oriented manifolds over the complex, stored as
//! piecewise-linear coordinate graphs inside top cubes.
//!
//! A piece of dimension m lives in one top cube Q of dimension d ≤ 3. It is
//! a simplicial mesh (points, segments, triangles or tetrahedra) whose
//! projection to the base axes A is non-degenerate on every cell, so the
//! piece is the graph of a PL map over a region of I^A. Its co-orientation
//! is the frame s·(e_j)_{j∉A} with the sign s applied to the first vector;
//! frames are always compared tangent-first, i.e. via det[T | frame].
//!
//! Because every cell lies inside the convex cube, a cell meets a face of Q
//! exactly in the sub-simplex spanned by its nodes on that face. All
//! intersections with the skeleton therefore happen at mesh nodes, which
//! are snapped onto faces at construction so that incidence is exact.

mod boundary;
mod intersect;
pub mod linalg;

pub use boundary::{boundary_geo, boundary_geo_with, chain_map_check, BoundaryConvention, ChainMapReport};
pub use intersect::{
    intersect_cochain, intersection_number, intersection_sign, intersection_sign_oracle, SignedPoint,
    SignedPointSet,
};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{ComplexPoint, CubeId, CubicalComplex};
use crate::cube::{bits, permutation_sign, FacePartition, Sign};
use crate::error::GeoError;
use linalg::{det, sigma_min, sub, unit};

/// Roots closer than this to the boundary of the target cube are rejected.
pub const INTERIOR_TOL: f64 = 1e-7;
/// Smallest admissible singular value of a normalized linearization.
pub const RANK_TOL: f64 = 1e-9;
/// Node coordinates this close to 0 or 1 are snapped onto the face.
pub const NODE_SNAP: f64 = 1e-12;
/// Points described in different cubes are identified within this distance.
pub const MATCH_TOL: f64 = 1e-9;
pub const MAX_GEO_DIM: usize = 3;

/// One co-oriented graph piece in a top cube.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphPiece {
    cube: CubeId,
    ambient: usize,
    base_axes: Vec<usize>,
    nodes: Vec<Vec<f64>>,
    cells: Vec<Vec<usize>>,
    normal_sign: Sign,
}

/// A boundary facet of a piece: the nodes of the facet (ascending) and the
/// node of the cell opposite to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub cell: usize,
    pub nodes: Vec<usize>,
    pub opposite: usize,
}

fn snap(x: f64) -> f64 {
    if x.abs() <= NODE_SNAP {
        0.0
    } else if (x - 1.0).abs() <= NODE_SNAP {
        1.0
    } else {
        x
    }
}

impl GraphPiece {
    /// `base_axes` are 0-based. Every cell has dim+1 distinct nodes and a
    /// non-degenerate projection to the base axes.
    pub fn new(
        cube: CubeId,
        ambient: usize,
        base_axes: Vec<usize>,
        nodes: Vec<Vec<f64>>,
        cells: Vec<Vec<usize>>,
        normal_sign: Sign,
    ) -> Result<Self, GeoError> {
        if ambient > MAX_GEO_DIM {
            return Err(GeoError::UnsupportedDimension(ambient));
        }
        if base_axes.windows(2).any(|w| w[0] >= w[1]) || base_axes.iter().any(|&a| a >= ambient) {
            return Err(GeoError::Schema(format!("base axes {base_axes:?} must be ascending and below {ambient}")));
        }
        let m = base_axes.len();
        let mut snapped = Vec::with_capacity(nodes.len());
        for p in nodes {
            if p.len() != ambient {
                return Err(GeoError::Schema(format!("node {p:?} does not have {ambient} coordinates")));
            }
            if p.iter().any(|x| !x.is_finite() || *x < -NODE_SNAP || *x > 1.0 + NODE_SNAP) {
                return Err(GeoError::Schema(format!("node {p:?} leaves the unit cube")));
            }
            snapped.push(p.into_iter().map(snap).collect::<Vec<f64>>());
        }
        if cells.is_empty() {
            return Err(GeoError::Schema("piece without cells".into()));
        }
        for c in &cells {
            if c.len() != m + 1 || c.iter().any(|&i| i >= snapped.len()) {
                return Err(GeoError::Schema(format!("cell {c:?} must list {} valid node indices", m + 1)));
            }
            let distinct: BTreeSet<_> = c.iter().collect();
            if distinct.len() != c.len() {
                return Err(GeoError::Schema(format!("cell {c:?} repeats a node")));
            }
        }
        let piece = Self { cube, ambient, base_axes, nodes: snapped, cells, normal_sign };
        for ci in 0..piece.cells.len() {
            let t = piece.cell_tangent(ci);
            let proj = linalg::minor(&t, &piece.base_axes);
            let scale: f64 = t.iter().map(|v| linalg::norm(v)).product();
            if !(det(&proj).abs() > 1e-12 * scale) {
                return Err(GeoError::Schema(format!("cell {ci} is degenerate or not a graph over the base axes")));
            }
        }
        if m == 1 {
            let mut spans: Vec<(f64, f64)> = piece
                .cells
                .iter()
                .map(|c| {
                    let (a, b) = (piece.nodes[c[0]][piece.base_axes[0]], piece.nodes[c[1]][piece.base_axes[0]]);
                    (a.min(b), a.max(b))
                })
                .collect();
            spans.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            if spans.windows(2).any(|w| w[1].0 < w[0].1 - NODE_SNAP) {
                return Err(GeoError::Schema("polyline folds back over its base axis".into()));
            }
        }
        Ok(piece)
    }

    pub fn cube(&self) -> CubeId {
        self.cube
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.base_axes.len()
    }
    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }
    pub fn base_axes(&self) -> &[usize] {
        &self.base_axes
    }
    pub fn complement_axes(&self) -> Vec<usize> {
        (0..self.ambient).filter(|a| !self.base_axes.contains(a)).collect()
    }
    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }
    pub fn normal_sign(&self) -> Sign {
        self.normal_sign
    }

    /// Same carrier, opposite co-orientation.
    pub fn reversed(&self) -> Self {
        let mut p = self.clone();
        p.normal_sign = -p.normal_sign;
        p
    }

    /// Edge vectors node_k − node_0 of a cell.
    pub fn cell_tangent(&self, cell: usize) -> Vec<Vec<f64>> {
        let c = &self.cells[cell];
        c[1..].iter().map(|&k| sub(&self.nodes[k], &self.nodes[c[0]])).collect()
    }

    /// The stored normal frame s·(e_j)_{j∉A}, each vector scaled by
    /// `scale[j]` when given (a diagonal pushforward).
    pub fn normal_frame(&self, scale: Option<&[f64]>) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = self
            .complement_axes()
            .into_iter()
            .map(|j| {
                let mut e = unit(self.ambient, j);
                if let Some(s) = scale {
                    e[j] = s[j];
                }
                e
            })
            .collect();
        if let Some(first) = out.first_mut() {
            first.iter_mut().for_each(|x| *x *= self.normal_sign.to_f64());
        }
        out
    }

    /// det[T | frame], including the sign s when the frame is empty.
    pub fn frame_det(&self, tangent: &[Vec<f64>], scale: Option<&[f64]>) -> f64 {
        let mut cols = tangent.to_vec();
        cols.extend(self.normal_frame(scale));
        let d = det(&cols);
        if self.codim() == 0 {
            d * self.normal_sign.to_f64()
        } else {
            d
        }
    }

    /// Facets of cells that belong to exactly one cell.
    pub fn boundary_facets(&self) -> Vec<Facet> {
        if self.dim() == 0 {
            return Vec::new();
        }
        let mut all: Vec<Facet> = Vec::new();
        for (ci, c) in self.cells.iter().enumerate() {
            for drop in 0..c.len() {
                let mut nodes: Vec<usize> = c.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, &n)| n).collect();
                nodes.sort_unstable();
                all.push(Facet { cell: ci, nodes, opposite: c[drop] });
            }
        }
        let count = |f: &Facet| all.iter().filter(|g| g.nodes == f.nodes).count();
        all.iter().filter(|f| count(f) == 1).cloned().collect()
    }

    /// Axes where every listed node sits on the same face value.
    fn common_bound(&self, nodes: &[usize]) -> Vec<(usize, f64)> {
        (0..self.ambient)
            .filter_map(|j| {
                let v = self.nodes[nodes[0]][j];
                if (v == 0.0 || v == 1.0) && nodes.iter().all(|&k| self.nodes[k][j] == v) {
                    Some((j, v))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Value of the PL graph over a base point, as a full point of Q.
    pub fn graph_at(&self, base: &[f64]) -> Option<Vec<f64>> {
        let m = self.dim();
        if base.len() != m {
            return None;
        }
        for c in &self.cells {
            if m == 0 {
                return Some(self.nodes[c[0]].clone());
            }
            let o: Vec<f64> = self.base_axes.iter().map(|&a| self.nodes[c[0]][a]).collect();
            let cols: Vec<Vec<f64>> = c[1..]
                .iter()
                .map(|&k| self.base_axes.iter().map(|&a| self.nodes[k][a]).collect::<Vec<f64>>())
                .map(|v| sub(&v, &o))
                .collect();
            let rhs = sub(base, &o);
            if let Some(mu) = linalg::solve(&cols, &rhs) {
                let s: f64 = mu.iter().sum();
                if mu.iter().all(|&x| x >= -1e-12) && s <= 1.0 + 1e-12 {
                    let mut p = self.nodes[c[0]].clone();
                    for (k, &w) in c[1..].iter().zip(&mu) {
                        for i in 0..self.ambient {
                            p[i] += w * (self.nodes[*k][i] - self.nodes[c[0]][i]);
                        }
                    }
                    return Some(p);
                }
            }
        }
        None
    }
}

/// A facet of a piece, named by the piece index and its sorted node list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacetRef {
    pub piece: usize,
    pub nodes: Vec<usize>,
}

impl FacetRef {
    fn to_raw(&self) -> Vec<usize> {
        let mut v = vec![self.piece];
        v.extend(&self.nodes);
        v
    }
    fn from_raw(v: &[usize]) -> Result<Self, GeoError> {
        let (&piece, rest) = v.split_first().ok_or_else(|| GeoError::Schema("empty facet reference".into()))?;
        let mut nodes = rest.to_vec();
        nodes.sort_unstable();
        Ok(Self { piece, nodes })
    }
}

/// A geometric cochain, graded by codimension, optionally viewed through
/// the time-`time` logistic flow.
#[derive(Clone, Debug, PartialEq)]
pub struct GeoCochain {
    codim: usize,
    ambient: usize,
    pieces: Vec<GraphPiece>,
    matching: Vec<(FacetRef, FacetRef)>,
    free: Vec<FacetRef>,
    time: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPiece {
    cube: usize,
    base_axes: Vec<usize>,
    nodes: Vec<Vec<f64>>,
    cells: Vec<Vec<usize>>,
    normal_sign: i64,
}

#[derive(Serialize, Deserialize)]
struct RawGeo {
    codim: usize,
    pieces: Vec<RawPiece>,
    #[serde(default)]
    matching: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "is_zero")]
    time: f64,
}

fn is_zero(t: &f64) -> bool {
    *t == 0.0
}

impl GeoCochain {
    pub fn new(complex: &CubicalComplex, codim: usize, pieces: Vec<GraphPiece>) -> Result<Self, GeoError> {
        let ambient = complex.top_dim();
        if ambient > MAX_GEO_DIM {
            return Err(GeoError::UnsupportedDimension(ambient));
        }
        if codim > ambient + 1 || (codim > ambient && !pieces.is_empty()) {
            return Err(GeoError::Schema(format!("codimension {codim} exceeds dimension {ambient}")));
        }
        for (i, p) in pieces.iter().enumerate() {
            if p.cube >= complex.num_cubes() || complex.dim(p.cube) != ambient {
                return Err(GeoError::Schema(format!("piece {i}: cube {} is not a top cube", p.cube)));
            }
            if p.ambient != ambient || p.codim() != codim {
                return Err(GeoError::Schema(format!("piece {i} has codimension {}, expected {codim}", p.codim())));
            }
        }
        let mut out = Self { codim, ambient, pieces, matching: Vec::new(), free: Vec::new(), time: 0.0 };
        out.auto_match(complex)?;
        Ok(out)
    }

    pub fn empty(complex: &CubicalComplex, codim: usize) -> Result<Self, GeoError> {
        Self::new(complex, codim, Vec::new())
    }

    pub fn codim(&self) -> usize {
        self.codim
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn pieces(&self) -> &[GraphPiece] {
        &self.pieces
    }
    pub fn matching(&self) -> &[(FacetRef, FacetRef)] {
        &self.matching
    }
    /// Facets lying on faces of the complex that bound only one top cube.
    pub fn free_facets(&self) -> &[FacetRef] {
        &self.free
    }
    pub fn time(&self) -> f64 {
        self.time
    }
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// The same cochain seen through f_t (times add).
    pub fn flowed(&self, t: f64) -> Self {
        let mut out = self.clone();
        out.time += t;
        out
    }

    /// W^op: every co-orientation reversed.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.pieces = out.pieces.iter().map(GraphPiece::reversed).collect();
        out
    }

    /// W ⊔ V for cochains with the same grading and flow time.
    pub fn disjoint_union(&self, complex: &CubicalComplex, other: &GeoCochain) -> Result<Self, GeoError> {
        if self.codim != other.codim || self.time != other.time {
            return Err(GeoError::Schema("union of cochains with different grading or flow time".into()));
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        let mut out = Self::new(complex, self.codim, pieces)?;
        out.time = self.time;
        Ok(out)
    }

    pub fn is_matched(&self, f: &FacetRef) -> bool {
        self.matching.iter().any(|(a, b)| a == f || b == f) || self.free.contains(f)
    }

    /// Canonical image of a point of piece `i` given in its cube.
    fn canonical(&self, complex: &CubicalComplex, i: usize, x: &[f64]) -> Result<(CubeId, Vec<f64>), GeoError> {
        let c = complex.canonical_point(&ComplexPoint { cube: self.pieces[i].cube, coords: x.to_vec() }, MATCH_TOL)?;
        Ok((c.cube, c.coords))
    }

    fn facet_images(&self, complex: &CubicalComplex, f: &FacetRef) -> Result<Vec<(CubeId, Vec<f64>)>, GeoError> {
        f.nodes.iter().map(|&k| self.canonical(complex, f.piece, &self.pieces[f.piece].nodes[k])).collect()
    }

    fn centroid(&self, f: &FacetRef) -> Vec<f64> {
        let p = &self.pieces[f.piece];
        let mut c = vec![0.0; self.ambient];
        for &k in &f.nodes {
            for (ci, x) in c.iter_mut().zip(&p.nodes[k]) {
                *ci += x / f.nodes.len() as f64;
            }
        }
        c
    }

    /// Pair up boundary facets whose images in the complex coincide.
    fn auto_match(&mut self, complex: &CubicalComplex) -> Result<(), GeoError> {
        struct Entry {
            facet: FacetRef,
            key: (CubeId, Vec<f64>),
            images: Vec<(CubeId, Vec<f64>)>,
        }
        let mut entries = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            for f in p.boundary_facets() {
                let fr = FacetRef { piece: i, nodes: f.nodes.clone() };
                let key = self.canonical(complex, i, &self.centroid(&fr))?;
                let images = self.facet_images(complex, &fr)?;
                entries.push(Entry { facet: fr, key, images });
            }
        }
        let same = |a: &(CubeId, Vec<f64>), b: &(CubeId, Vec<f64>)| {
            a.0 == b.0 && a.1.iter().zip(&b.1).all(|(x, y)| (x - y).abs() <= MATCH_TOL)
        };
        let mut used = vec![false; entries.len()];
        let (mut matching, mut free) = (Vec::new(), Vec::new());
        for a in 0..entries.len() {
            if used[a] {
                continue;
            }
            let partners: Vec<usize> = (a + 1..entries.len())
                .filter(|&b| {
                    !used[b]
                        && same(&entries[a].key, &entries[b].key)
                        && entries[a].images.iter().all(|x| entries[b].images.iter().any(|y| same(x, y)))
                })
                .collect();
            match partners.len() {
                0 => {
                    let p = &self.pieces[entries[a].facet.piece];
                    let bound = p.common_bound(&entries[a].facet.nodes);
                    if !bound.is_empty() && on_free_face(complex, p.cube, &bound) {
                        free.push(entries[a].facet.clone());
                    }
                }
                1 => {
                    used[partners[0]] = true;
                    matching.push((entries[a].facet.clone(), entries[partners[0]].facet.clone()));
                }
                _ => {
                    return Err(GeoError::Schema(format!(
                        "facet {:?} of piece {} coincides with more than one other facet",
                        entries[a].facet.nodes, entries[a].facet.piece
                    )))
                }
            }
            used[a] = true;
        }
        self.matching = matching;
        self.free = free;
        Ok(())
    }

    pub fn from_json(complex: &CubicalComplex, s: &str) -> Result<Self, GeoError> {
        let raw: RawGeo = serde_json::from_str(s)?;
        let ambient = complex.top_dim();
        let mut pieces = Vec::with_capacity(raw.pieces.len());
        for rp in raw.pieces {
            if rp.base_axes.contains(&0) {
                return Err(GeoError::Schema("base_axes are 1-based".into()));
            }
            let sign = Sign::from_i64(rp.normal_sign)
                .ok_or_else(|| GeoError::Schema(format!("normal_sign must be 1 or -1, got {}", rp.normal_sign)))?;
            let axes = rp.base_axes.iter().map(|a| a - 1).collect();
            pieces.push(GraphPiece::new(rp.cube, ambient, axes, rp.nodes, rp.cells, sign)?);
        }
        let mut out = Self::new(complex, raw.codim, pieces)?;
        if !raw.matching.is_empty() {
            let mut declared = BTreeSet::new();
            for pair in &raw.matching {
                if pair.len() != 2 {
                    return Err(GeoError::Schema("matching entries are pairs of facet references".into()));
                }
                let (a, b) = (FacetRef::from_raw(&pair[0])?, FacetRef::from_raw(&pair[1])?);
                declared.insert(if a <= b { (a, b) } else { (b, a) });
            }
            let found: BTreeSet<_> =
                out.matching.iter().map(|(a, b)| if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) }).collect();
            if declared != found {
                return Err(GeoError::Schema("declared matching disagrees with the facet geometry".into()));
            }
        }
        out.time = raw.time;
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let raw = RawGeo {
            codim: self.codim,
            pieces: self
                .pieces
                .iter()
                .map(|p| RawPiece {
                    cube: p.cube,
                    base_axes: p.base_axes.iter().map(|a| a + 1).collect(),
                    nodes: p.nodes.clone(),
                    cells: p.cells.clone(),
                    normal_sign: p.normal_sign.to_i64(),
                })
                .collect(),
            matching: self.matching.iter().map(|(a, b)| vec![a.to_raw(), b.to_raw()]).collect(),
            time: self.time,
        };
        serde_json::to_string_pretty(&raw).expect("cochain serializes")
    }
}

/// Does the face of top cube `q` cut out by `bound` lie in a codimension-1
/// face of the complex that bounds only `q`?
fn on_free_face(complex: &CubicalComplex, q: CubeId, bound: &[(usize, f64)]) -> bool {
    let full = FacePartition::full(complex.top_dim()).expect("dimension within range");
    bound.iter().any(|&(j, v)| {
        let g = complex.face_cube(q, &full.pin(j, v == 1.0));
        complex.top_cofaces(g).len() == 1
    })
}

/// Problems found by `validate_transverse`; empty means transverse.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TransversalityReport {
    pub issues: Vec<String>,
}

impl TransversalityReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for TransversalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.issues {
            writeln!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Bound coordinates of a node as (axis, value).
fn node_bound(x: &[f64]) -> Vec<(usize, f64)> {
    x.iter().enumerate().filter(|(_, &v)| v == 0.0 || v == 1.0).map(|(j, &v)| (j, v)).collect()
}

/// Checks transversality of every piece to every face of its cube, that
/// boundary facets on the skeleton are matched, and that matched facets
/// carry compatible co-orientations. The flow is a face-preserving
/// diffeomorphism, so the checks run on the unflowed carrier.
pub fn validate_transverse(complex: &CubicalComplex, w: &GeoCochain) -> TransversalityReport {
    let mut issues = Vec::new();
    let d = w.ambient;
    for (pi, p) in w.pieces.iter().enumerate() {
        let m = p.dim();
        for (ni, x) in p.nodes.iter().enumerate() {
            if x.iter().any(|&v| (v > 0.0 && v < INTERIOR_TOL) || (v < 1.0 && v > 1.0 - INTERIOR_TOL)) {
                issues.push(format!("piece {pi} node {ni} {x:?} is within {INTERIOR_TOL:e} of a face without lying on it"));
            }
        }
        for (ci, c) in p.cells.iter().enumerate() {
            let tangent = p.cell_tangent(ci);
            for &n in c {
                let bound = node_bound(&p.nodes[n]);
                if bound.is_empty() {
                    continue;
                }
                let k = bound.len();
                if k > m {
                    issues.push(format!(
                        "piece {pi} node {n} {:?} meets a stratum of codimension {k} > piece dimension {m}",
                        p.nodes[n]
                    ));
                    continue;
                }
                for sub_mask in 1u32..(1 << k) {
                    let s: Vec<(usize, f64)> = bits(sub_mask).map(|b| bound[b]).collect();
                    let on = c.iter().filter(|&&q| s.iter().all(|&(j, v)| p.nodes[q][j] == v)).count();
                    if on > 1 + m - s.len() {
                        issues.push(format!(
                            "piece {pi} cell {ci} has {on} nodes on the face {s:?}, so it is not transverse there"
                        ));
                    }
                }
                let mut cols = tangent.clone();
                cols.extend((0..d).filter(|j| !bound.iter().any(|b| b.0 == *j)).map(|j| unit(d, j)));
                if sigma_min(&cols, d) <= RANK_TOL {
                    issues.push(format!("piece {pi} cell {ci} is tangent to the face {bound:?} at node {n}"));
                }
            }
        }
        for f in p.boundary_facets() {
            let fr = FacetRef { piece: pi, nodes: f.nodes.clone() };
            if w.is_matched(&fr) {
                continue;
            }
            // An unmatched facet may cross faces (then ∂W is checked below)
            // but may not lie in a face that is not free.
            let bound = p.common_bound(&f.nodes);
            if !bound.is_empty() && !on_free_face(complex, p.cube, &bound) {
                issues.push(format!(
                    "piece {pi}: unmatched boundary facet {:?} lies in the skeleton at {:?}",
                    f.nodes, p.nodes[f.nodes[0]]
                ));
            }
        }
    }
    for (a, b) in &w.matching {
        match matched_orientations(w, a, b) {
            Some((oa, ob)) if oa == ob => {}
            Some(_) => issues.push(format!(
                "matched facets {:?}/{:?} of pieces {}/{} carry opposite co-orientations",
                a.nodes, b.nodes, a.piece, b.piece
            )),
            None => issues.push(format!(
                "co-orientation along matched facets of pieces {}/{} could not be compared",
                a.piece, b.piece
            )),
        }
    }
    if issues.is_empty() && w.pieces.iter().any(|p| p.dim() >= 2) {
        match boundary::boundary_geo(complex, w) {
            Ok(b) => issues.extend(validate_transverse(complex, &b).issues.into_iter().map(|i| format!("boundary: {i}"))),
            Err(e) => issues.push(format!("boundary: {e}")),
        }
    }
    TransversalityReport { issues }
}

fn facet_of(p: &GraphPiece, nodes: &[usize]) -> Option<Facet> {
    p.boundary_facets().into_iter().find(|f| f.nodes == nodes)
}

/// Co-orientation classes on both sides of a matched facet, expressed in a
/// common frame. Facets in a shared face G of two top cubes compare the
/// induced co-orientation of W ∩ G inside G (in G's own ascending axes);
/// facets inside one cube compare det[T_f | w | frame] with w pointing from
/// the second piece into the first.
fn matched_orientations(w: &GeoCochain, a: &FacetRef, b: &FacetRef) -> Option<(Sign, Sign)> {
    let (pa, pb) = (&w.pieces[a.piece], &w.pieces[b.piece]);
    let (fa, fb) = (facet_of(pa, &a.nodes)?, facet_of(pb, &b.nodes)?);
    let ga = pa.common_bound(&a.nodes);
    let gb = pb.common_bound(&b.nodes);
    let d = w.ambient;
    if pa.cube == pb.cube && ga.is_empty() && gb.is_empty() {
        let order: Vec<usize> = fa.nodes.clone();
        let tf: Vec<Vec<f64>> = order[1..].iter().map(|&k| sub(&pa.nodes[k], &pa.nodes[order[0]])).collect();
        let ca = centroid_of(pa, &fa.nodes);
        let cb = centroid_of(pb, &fb.nodes);
        let wa = sub(&pa.nodes[fa.opposite], &ca);
        let wb: Vec<f64> = sub(&pb.nodes[fb.opposite], &cb).iter().map(|x| -x).collect();
        let mut ta = tf.clone();
        ta.push(wa);
        let mut tb = tf;
        tb.push(wb);
        return Some((Sign::of_f64(pa.frame_det(&ta, None))?, Sign::of_f64(pb.frame_det(&tb, None))?));
    }
    let (&(ja, _), &(jb, _)) = (ga.first()?, gb.first()?);
    let g_coords = |j: usize, x: &[f64]| -> Vec<f64> {
        (0..d).filter(|&i| i != j).map(|i| x[i]).collect()
    };
    // Node correspondence through the shared face coordinates.
    let pts_a: Vec<Vec<f64>> = fa.nodes.iter().map(|&k| g_coords(ja, &pa.nodes[k])).collect();
    let tf: Vec<Vec<f64>> = pts_a[1..].iter().map(|x| sub(x, &pts_a[0])).collect();
    let induced = |p: &GraphPiece, f: &Facet, j: usize| -> Option<Sign> {
        let c = centroid_of(p, &f.nodes);
        let wv = sub(&p.nodes[f.opposite], &c);
        if wv[j] == 0.0 {
            return None;
        }
        let gs: Vec<Vec<f64>> = p
            .normal_frame(None)
            .iter()
            .map(|n| {
                let alpha = n[j] / wv[j];
                let g: Vec<f64> = n.iter().zip(&wv).map(|(x, y)| x - alpha * y).collect();
                g_coords(j, &g)
            })
            .collect();
        let mut cols = tf.clone();
        cols.extend(gs);
        let mut dv = det(&cols);
        if p.codim() == 0 {
            dv *= p.normal_sign.to_f64();
        }
        Sign::of_f64(dv)
    };
    Some((induced(pa, &fa, ja)?, induced(pb, &fb, jb)?))
}

fn centroid_of(p: &GraphPiece, nodes: &[usize]) -> Vec<f64> {
    let mut c = vec![0.0; p.ambient];
    for &k in nodes {
        for (ci, x) in c.iter_mut().zip(&p.nodes[k]) {
            *ci += x / nodes.len() as f64;
        }
    }
    c
}

/// Sign of the permutation listing `first` then `second`.
pub(crate) fn concat_sign(first: &[usize], second: &[usize]) -> Sign {
    let mut seq = first.to_vec();
    seq.extend_from_slice(second);
    permutation_sign(&seq)
}
