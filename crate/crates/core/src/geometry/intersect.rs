//! Signed intersection counts of geometric cochains with cubes.

use rayon::prelude::*;

use super::linalg::{det, minor, sigma_min, unit};
use super::{concat_sign, GeoCochain, GraphPiece, INTERIOR_TOL, MATCH_TOL, RANK_TOL};
use crate::cochain::IntCochain;
use crate::complex::{CubeId, CubicalComplex};
use crate::cube::Sign;
use crate::error::GeoError;
use crate::flow::{flow_jacobian, flow_point};

#[derive(Clone, Debug, PartialEq)]
pub struct SignedPoint {
    /// The cube the point is counted on, and its local coordinates there.
    pub cube: CubeId,
    pub coords: Vec<f64>,
    /// Unflowed local coordinates; used to identify repeated solutions.
    pub key: Vec<f64>,
    /// A top cube containing the point and its coordinates there.
    pub top_cube: CubeId,
    pub ambient: Vec<f64>,
    pub sign: Sign,
    /// Pieces that produced the point.
    pub pieces: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SignedPointSet {
    pub points: Vec<SignedPoint>,
}

impl SignedPointSet {
    pub fn signed_cardinality(&self) -> i64 {
        self.points.iter().map(|p| p.sign.to_i64()).sum()
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Adds a point unless it repeats one already present (same cube, key
    /// within `radius`). A repeat with the other sign is an error.
    pub fn insert(&mut self, p: SignedPoint, radius: f64) -> Result<(), GeoError> {
        for q in &mut self.points {
            if q.cube == p.cube && q.key.len() == p.key.len() && q.key.iter().zip(&p.key).all(|(a, b)| (a - b).abs() <= radius) {
                if q.sign != p.sign {
                    return Err(GeoError::InconsistentSigns { cube: p.cube, point: p.coords });
                }
                for i in p.pieces {
                    if !q.pieces.contains(&i) {
                        q.pieces.push(i);
                    }
                }
                return Ok(());
            }
        }
        self.points.push(p);
        Ok(())
    }
}

/// Compares the piece's co-orientation with the orientation of a face with
/// free axes `free`: +1 iff det[T | β_ν] and det[T | β_E] agree in sign.
/// Evaluated through the m×m minors of T on the base axes A and on the
/// bound axes R of the face:
///   det[T | e_Ā] = sgn(A,Ā)·det T_A,   det[T | e_C] = sgn(R,C)·det T_R.
pub fn intersection_sign(tangent: &[Vec<f64>], piece: &GraphPiece, free: &[usize]) -> Option<Sign> {
    let d = piece.ambient();
    let a = piece.base_axes();
    let abar = piece.complement_axes();
    let r: Vec<usize> = (0..d).filter(|j| !free.contains(j)).collect();
    if r.len() != tangent.len() {
        return None;
    }
    let ta = Sign::of_f64(det(&minor(tangent, a)))?;
    let tr = Sign::of_f64(det(&minor(tangent, &r)))?;
    Some(piece.normal_sign() * concat_sign(a, &abar) * ta * concat_sign(&r, free) * tr)
}

/// The same comparison through full d×d determinants.
pub fn intersection_sign_oracle(tangent: &[Vec<f64>], piece: &GraphPiece, free: &[usize], scale: Option<&[f64]>) -> Option<Sign> {
    let d = piece.ambient();
    let nu = piece.frame_det(tangent, scale);
    let mut cols = tangent.to_vec();
    cols.extend(free.iter().map(|&j| unit(d, j)));
    Some(Sign::of_f64(nu)? * Sign::of_f64(det(&cols))?)
}

/// The signed set Int(W, E) and its signed cardinality I(W, E). Points on a
/// face shared by several top cubes are counted once.
pub fn intersection_number(complex: &CubicalComplex, w: &GeoCochain, e: CubeId) -> Result<(SignedPointSet, i64), GeoError> {
    if e >= complex.num_cubes() {
        return Err(GeoError::Schema(format!("cube {e} does not exist")));
    }
    if complex.dim(e) != w.codim() {
        return Err(GeoError::Schema(format!(
            "cube {e} has dimension {}, cochain has codimension {}",
            complex.dim(e),
            w.codim()
        )));
    }
    let d = w.ambient();
    let mut set = SignedPointSet::default();
    for (q, face) in complex.top_cofaces(e) {
        let bound = face.bound_axes();
        let free = face.free_axes();
        for (pi, p) in w.pieces().iter().enumerate().filter(|(_, p)| p.cube() == *q) {
            for (ci, cell) in p.cells().iter().enumerate() {
                let on: Vec<usize> =
                    cell.iter().copied().filter(|&n| bound.iter().all(|&(j, v)| p.nodes()[n][j] == v)).collect();
                if on.is_empty() {
                    continue;
                }
                let x = &p.nodes()[on[0]];
                let key: Vec<f64> = free.iter().map(|&j| x[j]).collect();
                let degenerate = |reason: &str| GeoError::Degenerate { cube: e, point: key.clone(), reason: reason.to_string() };
                if on.len() > 1 {
                    return Err(degenerate("a mesh cell meets the cube in more than one point"));
                }
                if key.iter().any(|&v| v < INTERIOR_TOL || v > 1.0 - INTERIOR_TOL) {
                    return Err(degenerate("the intersection point lies on the boundary of the cube"));
                }
                let jac = flow_jacobian(x, w.time());
                let y = flow_point(x, w.time());
                let tangent: Vec<Vec<f64>> = p
                    .cell_tangent(ci)
                    .into_iter()
                    .map(|v| v.iter().zip(&jac).map(|(a, b)| a * b).collect())
                    .collect();
                let mut cols = tangent.clone();
                cols.extend(free.iter().map(|&j| unit(d, j)));
                if sigma_min(&cols, d) <= RANK_TOL {
                    return Err(degenerate("rank-deficient linearization"));
                }
                let sign = intersection_sign(&tangent, p, &free).ok_or_else(|| degenerate("vanishing minor"))?;
                let coords = free.iter().map(|&j| y[j]).collect();
                set.insert(
                    SignedPoint { cube: e, coords, key, top_cube: *q, ambient: y, sign, pieces: vec![pi] },
                    MATCH_TOL,
                )?;
            }
        }
    }
    let n = set.signed_cardinality();
    Ok((set, n))
}

/// cI(W): the cochain E ↦ I(W, E) on cubes of dimension codim(W).
pub fn intersect_cochain(complex: &CubicalComplex, w: &GeoCochain) -> Result<IntCochain, GeoError> {
    let values: Vec<(CubeId, i64)> = complex
        .cubes_of_dim(w.codim())
        .par_iter()
        .map(|&e| intersection_number(complex, w, e).map(|(_, n)| (e, n)))
        .collect::<Result<_, _>>()?;
    Ok(IntCochain::from_pairs(complex, w.codim(), values.into_iter().filter(|&(_, n)| n != 0))
        .expect("cubes of the right dimension"))
}
