//! Ordered cubical complexes: validation of the two axioms, torus grids,
//! face lookup and canonical points.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cube::{bits, enumerate_faces, FacePartition};
use crate::error::ComplexError;

/// Index of a cube in its complex.
pub type CubeId = usize;

/// Default tolerance for snapping coordinates onto faces.
pub const SNAP_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cube {
    pub dim: usize,
    /// Global vertex indices in binary-counting order of the local cube.
    pub verts: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RawVertex {
    pub id: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RawCube {
    pub dim: usize,
    pub verts: Vec<String>,
}

/// The JSON schema of a complex, before validation.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RawComplex {
    pub dimension_top: usize,
    pub vertices: Vec<RawVertex>,
    pub order: Vec<[String; 2]>,
    pub cubes: Vec<RawCube>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    UnknownVertex { cube: usize, id: String },
    DuplicateVertexId { id: String },
    UnknownOrderVertex { id: String },
    WrongVertexCount { cube: usize, dim: usize, got: usize },
    RepeatedVertex { cube: usize },
    MissingVertexCube { vertex: String },
    OrderNotPreserved { cube: usize, lower: String, upper: String },
    ExtraOrderRelation { cube: usize, lower: String, upper: String },
    MissingFace { cube: usize, interval: FacePartition },
    FaceOrderMismatch { cube: usize, interval: FacePartition, face: usize },
    DuplicateVertexSet { first: usize, second: usize },
    TopDimension { declared: usize, actual: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            UnknownVertex { cube, id } => write!(f, "cube {cube}: unknown vertex id {id:?}"),
            DuplicateVertexId { id } => write!(f, "vertex id {id:?} declared twice"),
            UnknownOrderVertex { id } => write!(f, "order relation mentions unknown vertex {id:?}"),
            WrongVertexCount { cube, dim, got } => {
                write!(f, "cube {cube}: dimension {dim} needs {} vertices, got {got}", 1usize << dim)
            }
            RepeatedVertex { cube } => write!(f, "cube {cube}: repeated vertex"),
            MissingVertexCube { vertex } => write!(f, "axiom 1: vertex {vertex:?} is not a cube"),
            OrderNotPreserved { cube, lower, upper } => {
                write!(f, "cube {cube}: vertices {lower:?} < {upper:?} in the cube but not a covering pair of the order")
            }
            ExtraOrderRelation { cube, lower, upper } => {
                write!(f, "cube {cube}: order relates {lower:?} < {upper:?}, which are not adjacent that way in the cube")
            }
            MissingFace { cube, interval } => {
                write!(f, "axiom 2: cube {cube}, interval {interval}: no cube with these vertices")
            }
            FaceOrderMismatch { cube, interval, face } => write!(
                f,
                "axiom 2: cube {cube}, interval {interval}: cube {face} lists the vertices in a different order"
            ),
            DuplicateVertexSet { first, second } => {
                write!(f, "cubes {first} and {second} have the same vertex set")
            }
            TopDimension { declared, actual } => {
                write!(f, "dimension_top is {declared} but the largest cube has dimension {actual}")
            }
        }
    }
}

/// Outcome of `validate`; empty means valid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Check both axioms, the local order condition and distinct vertex sets.
///
/// The order condition is checked per cube: inside a cube, the covering
/// pairs of the declared order must be exactly the edges of the standard
/// cube, directed from the smaller to the larger vertex set. Wraparound
/// cubes of a torus grid make the global relation cyclic, so it is never
/// required to be acyclic.
pub fn validate(raw: &RawComplex) -> ValidationReport {
    let mut out = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, v) in raw.vertices.iter().enumerate() {
        if index.insert(v.id.as_str(), i).is_some() {
            out.push(Violation::DuplicateVertexId { id: v.id.clone() });
        }
    }
    let mut covers: HashSet<(usize, usize)> = HashSet::new();
    for [a, b] in &raw.order {
        match (index.get(a.as_str()), index.get(b.as_str())) {
            (Some(&x), Some(&y)) => {
                covers.insert((x, y));
            }
            (None, _) => out.push(Violation::UnknownOrderVertex { id: a.clone() }),
            (_, None) => out.push(Violation::UnknownOrderVertex { id: b.clone() }),
        }
    }

    let mut cubes: Vec<Option<Vec<usize>>> = Vec::with_capacity(raw.cubes.len());
    for (c, cube) in raw.cubes.iter().enumerate() {
        if cube.dim > crate::cube::MAX_DIM || cube.verts.len() != 1usize << cube.dim {
            out.push(Violation::WrongVertexCount { cube: c, dim: cube.dim, got: cube.verts.len() });
            cubes.push(None);
            continue;
        }
        let mut vs = Vec::with_capacity(cube.verts.len());
        let mut ok = true;
        for id in &cube.verts {
            match index.get(id.as_str()) {
                Some(&i) => vs.push(i),
                None => {
                    out.push(Violation::UnknownVertex { cube: c, id: id.clone() });
                    ok = false;
                }
            }
        }
        if ok {
            let set: HashSet<usize> = vs.iter().copied().collect();
            if set.len() != vs.len() {
                out.push(Violation::RepeatedVertex { cube: c });
                ok = false;
            }
        }
        cubes.push(ok.then_some(vs));
    }

    let actual_top = raw.cubes.iter().map(|c| c.dim).max().unwrap_or(0);
    if !raw.cubes.is_empty() && actual_top != raw.dimension_top {
        out.push(Violation::TopDimension { declared: raw.dimension_top, actual: actual_top });
    }

    let mut by_set: HashMap<Vec<usize>, usize> = HashMap::new();
    for (c, vs) in cubes.iter().enumerate() {
        if let Some(vs) = vs {
            let mut key = vs.clone();
            key.sort_unstable();
            if let Some(&first) = by_set.get(&key) {
                out.push(Violation::DuplicateVertexSet { first, second: c });
            } else {
                by_set.insert(key, c);
            }
        }
    }

    for (i, v) in raw.vertices.iter().enumerate() {
        if !by_set.contains_key(&vec![i]) {
            out.push(Violation::MissingVertexCube { vertex: v.id.clone() });
        }
    }

    let name = |i: usize| raw.vertices[i].id.clone();
    for (c, vs) in cubes.iter().enumerate() {
        let Some(vs) = vs else { continue };
        let d = raw.cubes[c].dim;
        // Local order: edges S -> S + {a} must be covering pairs, and no
        // other covering pair may join two vertices of the cube.
        let pos: HashMap<usize, u32> = vs.iter().enumerate().map(|(s, &v)| (v, s as u32)).collect();
        for s in 0..1u32 << d {
            for a in 0..d {
                if s >> a & 1 == 0 {
                    let t = s | 1 << a;
                    if !covers.contains(&(vs[s as usize], vs[t as usize])) {
                        out.push(Violation::OrderNotPreserved {
                            cube: c,
                            lower: name(vs[s as usize]),
                            upper: name(vs[t as usize]),
                        });
                    }
                }
            }
        }
        if d >= 1 {
            for &(x, y) in &covers {
                if let (Some(&s), Some(&t)) = (pos.get(&x), pos.get(&y)) {
                    let diff = s ^ t;
                    let edge = diff.count_ones() == 1 && s & diff == 0;
                    if !edge {
                        out.push(Violation::ExtraOrderRelation { cube: c, lower: name(x), upper: name(y) });
                    }
                }
            }
        }
        // Axiom 2: every interval is a cube with the induced vertex order.
        if let Ok(faces) = enumerate_faces(d, None) {
            for f in faces {
                if f.dim() == d {
                    continue;
                }
                let want: Vec<usize> = f.vertices().iter().map(|v| vs[v.mask() as usize]).collect();
                let mut key = want.clone();
                key.sort_unstable();
                match by_set.get(&key) {
                    None => out.push(Violation::MissingFace { cube: c, interval: f }),
                    Some(&fc) => {
                        if cubes[fc].as_ref() != Some(&want) {
                            out.push(Violation::FaceOrderMismatch { cube: c, interval: f, face: fc });
                        }
                    }
                }
            }
        }
    }
    ValidationReport { violations: out }
}

/// The product of circles subdivided into `dims[i]` ≥ 3 segments.
pub fn build_torus_grid(dims: &[usize]) -> Result<CubicalComplex, ComplexError> {
    CubicalComplex::torus(dims)
}

/// A point of the realization, in the local coordinates of a cube.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoint {
    pub cube: CubeId,
    pub coords: Vec<f64>,
}

/// The open face containing a point, as its own cube with local coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalPoint {
    pub cube: CubeId,
    pub coords: Vec<f64>,
    /// Location of that face inside the cube the point was given in.
    pub face: FacePartition,
}

/// A validated, immutable ordered cubical complex.
#[derive(Debug)]
pub struct CubicalComplex {
    vertex_ids: Vec<String>,
    order: Vec<(usize, usize)>,
    cubes: Vec<Cube>,
    top: usize,
    by_verts: HashMap<Vec<usize>, CubeId>,
    by_dim: Vec<Vec<CubeId>>,
    cofaces: OnceLock<Vec<Vec<(CubeId, FacePartition)>>>,
}

impl PartialEq for CubicalComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_ids == other.vertex_ids && self.order == other.order && self.cubes == other.cubes
    }
}

impl CubicalComplex {
    /// Validate and build.
    pub fn from_raw(raw: &RawComplex) -> Result<Self, ComplexError> {
        let report = validate(raw);
        if !report.is_valid() {
            return Err(ComplexError::Invalid(report.to_string()));
        }
        let index: HashMap<&str, usize> =
            raw.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        let cubes = raw
            .cubes
            .iter()
            .map(|c| Cube { dim: c.dim, verts: c.verts.iter().map(|id| index[id.as_str()]).collect() })
            .collect();
        let order = raw.order.iter().map(|[a, b]| (index[a.as_str()], index[b.as_str()])).collect();
        Ok(Self::assemble(raw.vertices.iter().map(|v| v.id.clone()).collect(), order, cubes))
    }

    fn assemble(vertex_ids: Vec<String>, order: Vec<(usize, usize)>, cubes: Vec<Cube>) -> Self {
        let top = cubes.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top + 1];
        let mut by_verts = HashMap::with_capacity(cubes.len());
        for (i, c) in cubes.iter().enumerate() {
            by_dim[c.dim].push(i);
            by_verts.insert(c.verts.clone(), i);
        }
        CubicalComplex { vertex_ids, order, cubes, top, by_verts, by_dim, cofaces: OnceLock::new() }
    }

    pub fn to_raw(&self) -> RawComplex {
        RawComplex {
            dimension_top: self.top,
            vertices: self.vertex_ids.iter().map(|id| RawVertex { id: id.clone() }).collect(),
            order: self
                .order
                .iter()
                .map(|&(a, b)| [self.vertex_ids[a].clone(), self.vertex_ids[b].clone()])
                .collect(),
            cubes: self
                .cubes
                .iter()
                .map(|c| RawCube {
                    dim: c.dim,
                    verts: c.verts.iter().map(|&v| self.vertex_ids[v].clone()).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, ComplexError> {
        let raw: RawComplex = serde_json::from_str(s).map_err(|e| ComplexError::Schema(e.to_string()))?;
        Self::from_raw(&raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("complex serializes")
    }

    /// The n-torus as a product of circles subdivided into `dims[i]` arcs.
    ///
    /// Vertices are indexed lexicographically by grid coordinates. The cube
    /// at grid position p spanning axes S lists p + e_T (mod k) for T ⊆ S in
    /// binary-counting order, so every cube is oriented coherently with the
    /// grid.
    pub fn torus(dims: &[usize]) -> Result<Self, ComplexError> {
        if let Some(&k) = dims.iter().find(|&&k| k < 3) {
            return Err(ComplexError::GridTooCoarse(k));
        }
        let n = dims.len();
        if n > crate::cube::MAX_DIM {
            return Err(crate::error::CubeError::DimensionTooLarge { n, max: crate::cube::MAX_DIM }.into());
        }
        let count: usize = dims.iter().product();
        let unrank = |mut r: usize| {
            let mut p = vec![0; n];
            for a in (0..n).rev() {
                p[a] = r % dims[a];
                r /= dims[a];
            }
            p
        };
        let rank = |p: &[usize]| p.iter().zip(dims).fold(0, |acc, (&x, &k)| acc * k + x);
        let shift = |p: &[usize], mask: u32| {
            let mut q = p.to_vec();
            for a in bits(mask) {
                q[a] = (q[a] + 1) % dims[a];
            }
            rank(&q)
        };
        let ids: Vec<String> = (0..count)
            .map(|r| format!("v{}", unrank(r).iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")))
            .collect();
        let mut order = Vec::new();
        for r in 0..count {
            let p = unrank(r);
            for a in 0..n {
                order.push((r, shift(&p, 1 << a)));
            }
        }
        let mut cubes = Vec::new();
        for d in 0..=n {
            for free in 0u32..1 << n {
                if free.count_ones() as usize != d {
                    continue;
                }
                for r in 0..count {
                    let p = unrank(r);
                    let verts = (0..1u32 << d).map(|s| shift(&p, crate::cube::deposit(s, free))).collect();
                    cubes.push(Cube { dim: d, verts });
                }
            }
        }
        Ok(Self::assemble(ids, order, cubes))
    }

    /// The standard n-cube with all of its faces.
    pub fn standard_cube(n: usize) -> Result<Self, ComplexError> {
        let faces = enumerate_faces(n, None)?;
        let ids: Vec<String> = (0..1u32 << n).map(|m| format!("v{m}")).collect();
        let mut order = Vec::new();
        for m in 0..1u32 << n {
            for a in 0..n {
                if m >> a & 1 == 0 {
                    order.push((m as usize, (m | 1 << a) as usize));
                }
            }
        }
        let cubes = faces
            .iter()
            .map(|f| Cube { dim: f.dim(), verts: f.vertices().iter().map(|v| v.mask() as usize).collect() })
            .collect();
        Ok(Self::assemble(ids, order, cubes))
    }

    pub fn top_dim(&self) -> usize {
        self.top
    }
    pub fn num_cubes(&self) -> usize {
        self.cubes.len()
    }
    pub fn num_vertices(&self) -> usize {
        self.vertex_ids.len()
    }
    pub fn cube(&self, id: CubeId) -> &Cube {
        &self.cubes[id]
    }
    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }
    pub fn dim(&self, id: CubeId) -> usize {
        self.cubes[id].dim
    }
    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertex_ids[v]
    }

    /// Cubes of dimension `d`, in index order.
    pub fn cubes_of_dim(&self, d: usize) -> &[CubeId] {
        self.by_dim.get(d).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(d, c)| if d % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) }).sum()
    }

    fn check(&self, id: CubeId) -> Result<(), ComplexError> {
        if id < self.cubes.len() {
            Ok(())
        } else {
            Err(ComplexError::NoSuchCube(id))
        }
    }

    /// The cube occupying face `f` of cube `id` (f in `id`'s local coordinates).
    pub fn face_cube(&self, id: CubeId, f: &FacePartition) -> CubeId {
        let c = &self.cubes[id];
        debug_assert_eq!(f.n(), c.dim);
        if f.dim() == c.dim {
            return id;
        }
        let vs: Vec<usize> = f.vertices().iter().map(|v| c.verts[v.mask() as usize]).collect();
        *self.by_verts.get(&vs).expect("validated complex is closed under faces")
    }

    /// All faces of dimension `d` with their position in the cube.
    pub fn faces_of(&self, id: CubeId, d: usize) -> Result<Vec<(CubeId, FacePartition)>, ComplexError> {
        self.check(id)?;
        let dim = self.cubes[id].dim;
        if d > dim {
            return Err(ComplexError::FaceDimension { d, dim });
        }
        Ok(enumerate_faces(dim, Some(d))?.into_iter().map(|f| (self.face_cube(id, &f), f)).collect())
    }

    /// Codimension-one faces as (face, local axis, value).
    pub fn facets(&self, id: CubeId) -> Vec<(CubeId, usize, bool)> {
        let d = self.cubes[id].dim;
        let full = FacePartition::full(d).expect("dimension within range");
        let mut out = Vec::with_capacity(2 * d);
        for a in 0..d {
            for eps in [false, true] {
                out.push((self.face_cube(id, &full.pin(a, eps)), a, eps));
            }
        }
        out
    }

    /// For each cube, every top-dimensional cube containing it together with
    /// its position there (the shared-face table).
    pub fn top_cofaces(&self, id: CubeId) -> &[(CubeId, FacePartition)] {
        let table = self.cofaces.get_or_init(|| {
            let mut t = vec![Vec::new(); self.cubes.len()];
            for &s in self.cubes_of_dim(self.top) {
                for f in enumerate_faces(self.top, None).expect("dimension within range") {
                    t[self.face_cube(s, &f)].push((s, f));
                }
            }
            t
        });
        &table[id]
    }

    /// Identify the open face containing `p`; coordinates within `tol` of 0
    /// or 1 are snapped. The result does not depend on which cube containing
    /// the point was used to describe it.
    pub fn canonical_point(&self, p: &ComplexPoint, tol: f64) -> Result<CanonicalPoint, ComplexError> {
        self.check(p.cube)?;
        let d = self.cubes[p.cube].dim;
        if p.coords.len() != d {
            return Err(ComplexError::PointArity { got: p.coords.len(), dim: d });
        }
        let (mut f0, mut f01, mut f1) = (0u32, 0u32, 0u32);
        let mut local = Vec::new();
        for (i, &x) in p.coords.iter().enumerate() {
            if !(x >= -tol && x <= 1.0 + tol) {
                return Err(ComplexError::PointOutside { value: x });
            }
            if x.abs() <= tol {
                f0 |= 1 << i;
            } else if (x - 1.0).abs() <= tol {
                f1 |= 1 << i;
            } else {
                f01 |= 1 << i;
                local.push(x);
            }
        }
        let face = FacePartition::from_masks(d, f0, f01, f1)?;
        Ok(CanonicalPoint { cube: self.face_cube(p.cube, &face), coords: local, face })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_counts() {
        let t = CubicalComplex::torus(&[3, 3]).unwrap();
        let n: Vec<usize> = (0..=2).map(|d| t.cubes_of_dim(d).len()).collect();
        assert_eq!(n, vec![9, 18, 9]);
        assert_eq!(t.euler_characteristic(), 0);
        let c = CubicalComplex::torus(&[3]).unwrap();
        assert_eq!((c.cubes_of_dim(0).len(), c.cubes_of_dim(1).len()), (3, 3));
        let t3 = CubicalComplex::torus(&[3, 3, 3]).unwrap();
        let n: Vec<usize> = (0..=3).map(|d| t3.cubes_of_dim(d).len()).collect();
        assert_eq!(n, vec![27, 81, 81, 27]);
        assert!(CubicalComplex::torus(&[2, 3]).is_err());
    }

    #[test]
    fn torus_and_cube_validate() {
        for dims in [vec![3], vec![3, 3], vec![3, 4], vec![3, 3, 3]] {
            let t = CubicalComplex::torus(&dims).unwrap();
            let r = validate(&t.to_raw());
            assert!(r.is_valid(), "{dims:?}: {r}");
        }
        for n in 0..=4 {
            let c = CubicalComplex::standard_cube(n).unwrap();
            assert!(validate(&c.to_raw()).is_valid());
            assert_eq!(c.euler_characteristic(), 1);
        }
    }

    #[test]
    fn roundtrip_json() {
        let t = CubicalComplex::torus(&[3, 3]).unwrap();
        let back = CubicalComplex::from_json(&t.to_json()).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn rejects_bad_order_and_missing_face() {
        let t = CubicalComplex::torus(&[3, 3]).unwrap();
        let mut raw = t.to_raw();
        let sq = raw.cubes.iter().position(|c| c.dim == 2).unwrap();
        raw.cubes[sq].verts.swap(0, 1);
        let r = validate(&raw);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::OrderNotPreserved { .. })));

        let mut raw = t.to_raw();
        let e = raw.cubes.iter().position(|c| c.dim == 1).unwrap();
        raw.cubes.remove(e);
        let r = validate(&raw);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::MissingFace { .. })), "{r}");
        assert!(CubicalComplex::from_raw(&raw).is_err());
    }

    #[test]
    fn collapsed_square_rejected() {
        // One square whose four corners are the same vertex.
        let raw = RawComplex {
            dimension_top: 2,
            vertices: vec![RawVertex { id: "a".into() }],
            order: vec![],
            cubes: vec![
                RawCube { dim: 0, verts: vec!["a".into()] },
                RawCube { dim: 2, verts: vec!["a".into(); 4] },
            ],
        };
        assert!(!validate(&raw).is_valid());
    }

    #[test]
    fn faces_of_square() {
        let t = CubicalComplex::torus(&[3, 3]).unwrap();
        let sq = t.cubes_of_dim(2)[0];
        let edges = t.faces_of(sq, 1).unwrap();
        assert_eq!(edges.len(), 4);
        assert_eq!(t.faces_of(sq, 2).unwrap(), vec![(sq, FacePartition::full(2).unwrap())]);
        let e = t.cubes_of_dim(1)[0];
        let vs = t.faces_of(e, 0).unwrap();
        assert_eq!(vs[0].0, t.face_cube(e, &FacePartition::new(1, &[1], &[], &[]).unwrap()));
        assert!(t.faces_of(sq, 3).is_err());
    }

    #[test]
    fn canonical_corner_agrees() {
        let t = CubicalComplex::torus(&[3, 3]).unwrap();
        let sq = t.cubes_of_dim(2)[4];
        let c = t.canonical_point(&ComplexPoint { cube: sq, coords: vec![1.0, 1.0] }, SNAP_TOL).unwrap();
        assert_eq!(t.dim(c.cube), 0);
        let reps: Vec<_> = t
            .top_cofaces(c.cube)
            .iter()
            .map(|(s, f)| t.canonical_point(&ComplexPoint { cube: *s, coords: f.center() }, SNAP_TOL).unwrap().cube)
            .collect();
        assert_eq!(reps.len(), 4);
        assert!(reps.iter().all(|&r| r == c.cube));
        let b = t.canonical_point(&ComplexPoint { cube: sq, coords: vec![0.4, 0.0] }, SNAP_TOL).unwrap();
        assert_eq!(b.coords, vec![0.4]);
        assert_eq!(t.dim(b.cube), 1);
        assert!(t.canonical_point(&ComplexPoint { cube: sq, coords: vec![1.5, 0.0] }, SNAP_TOL).is_err());
    }
}
