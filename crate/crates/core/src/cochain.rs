//! Integer cubical chains and cochains, the Serre diagonal and the cup
//! product, and integral cohomology through Smith normal form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::complex::{CubeId, CubicalComplex};
use crate::cube::{shuffle_sign, FacePartition, Sign, VertexSet};
use crate::error::CochainError;
use crate::snf::{smith_normal_form, smith_normal_form_big};

fn checked(x: Option<i64>) -> i64 {
    x.expect("integer overflow in cochain arithmetic")
}

macro_rules! graded_map {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Debug, PartialEq, Eq, Default)]
        pub struct $name {
            degree: usize,
            coeffs: BTreeMap<CubeId, i64>,
        }

        impl $name {
            pub fn zero(degree: usize) -> Self {
                Self { degree, coeffs: BTreeMap::new() }
            }

            /// Build from (cube, value) pairs; repeated cubes add up.
            pub fn from_pairs(
                complex: &CubicalComplex,
                degree: usize,
                pairs: impl IntoIterator<Item = (CubeId, i64)>,
            ) -> Result<Self, CochainError> {
                let mut out = Self::zero(degree);
                for (c, x) in pairs {
                    if c >= complex.num_cubes() {
                        return Err(CochainError::NoSuchCube(c));
                    }
                    let dim = complex.dim(c);
                    if dim != degree {
                        return Err(CochainError::WrongDegree { cube: c, dim, degree });
                    }
                    out.add_at(c, x);
                }
                Ok(out)
            }

            /// The indicator of a single cube.
            pub fn indicator(complex: &CubicalComplex, cube: CubeId) -> Self {
                let mut out = Self::zero(complex.dim(cube));
                out.add_at(cube, 1);
                out
            }

            pub fn degree(&self) -> usize {
                self.degree
            }

            pub fn get(&self, c: CubeId) -> i64 {
                self.coeffs.get(&c).copied().unwrap_or(0)
            }

            pub fn iter(&self) -> impl Iterator<Item = (CubeId, i64)> + '_ {
                self.coeffs.iter().map(|(&c, &x)| (c, x))
            }

            pub fn support_len(&self) -> usize {
                self.coeffs.len()
            }

            pub fn is_zero(&self) -> bool {
                self.coeffs.is_empty()
            }

            pub(crate) fn add_at(&mut self, c: CubeId, x: i64) {
                if x == 0 {
                    return;
                }
                let e = self.coeffs.entry(c).or_insert(0);
                *e = checked(e.checked_add(x));
                if *e == 0 {
                    self.coeffs.remove(&c);
                }
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.degree, other.degree, "degree mismatch");
                let mut out = self.clone();
                for (c, x) in other.iter() {
                    out.add_at(c, x);
                }
                out
            }

            pub fn scale(&self, k: i64) -> Self {
                let mut out = Self::zero(self.degree);
                for (c, x) in self.iter() {
                    out.add_at(c, checked(x.checked_mul(k)));
                }
                out
            }

            pub fn neg(&self) -> Self {
                self.scale(-1)
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.neg())
            }

            /// Dense vector over the cubes of this degree, in index order.
            pub fn to_dense(&self, complex: &CubicalComplex) -> Vec<i64> {
                complex.cubes_of_dim(self.degree).iter().map(|&c| self.get(c)).collect()
            }

            pub fn from_dense(complex: &CubicalComplex, degree: usize, values: &[i64]) -> Self {
                let mut out = Self::zero(degree);
                for (&c, &x) in complex.cubes_of_dim(degree).iter().zip(values) {
                    out.add_at(c, x);
                }
                out
            }

            pub fn to_json(&self) -> String {
                let raw = RawGraded {
                    degree: self.degree,
                    values: self.coeffs.iter().map(|(c, x)| (c.to_string(), *x)).collect(),
                };
                serde_json::to_string_pretty(&raw).expect("serializes")
            }

            pub fn from_json(complex: &CubicalComplex, s: &str) -> Result<Self, CochainError> {
                let raw: RawGraded = serde_json::from_str(s)?;
                let mut pairs = Vec::new();
                for (k, x) in raw.values {
                    let c: usize = k.parse().map_err(|_| CochainError::Schema(format!("bad cube index {k:?}")))?;
                    pairs.push((c, x));
                }
                Self::from_pairs(complex, raw.degree, pairs)
            }
        }
    };
}

#[derive(Serialize, Deserialize)]
struct RawGraded {
    degree: usize,
    values: BTreeMap<String, i64>,
}

graded_map!(IntChain, "A formal integer combination of cubes of one dimension.");
graded_map!(IntCochain, "An integer-valued function on the cubes of one dimension.");

/// ∂ of a single cube: Σ_k (−1)^k (face x_k = 1 − face x_k = 0) over the
/// local axes k, from the Leibniz rule applied to [0,1]^{⊗d}.
pub fn cube_boundary(complex: &CubicalComplex, cube: CubeId) -> Vec<(CubeId, i64)> {
    let d = complex.dim(cube);
    let full = FacePartition::full(d).expect("dimension within range");
    let mut out = Vec::with_capacity(2 * d);
    for k in 0..d {
        let s = if k % 2 == 0 { 1 } else { -1 };
        out.push((complex.face_cube(cube, &full.pin(k, true)), s));
        out.push((complex.face_cube(cube, &full.pin(k, false)), -s));
    }
    out
}

/// Boundary; degree-0 chains map to the zero chain of degree 0.
pub fn boundary(complex: &CubicalComplex, c: &IntChain) -> IntChain {
    if c.degree == 0 {
        return IntChain::zero(0);
    }
    let mut out = IntChain::zero(c.degree - 1);
    for (cube, x) in c.iter() {
        for (f, s) in cube_boundary(complex, cube) {
            out.add_at(f, checked(x.checked_mul(s)));
        }
    }
    out
}

/// Coboundary with δα(c) = α(∂c).
pub fn coboundary(complex: &CubicalComplex, a: &IntCochain) -> IntCochain {
    let mut out = IntCochain::zero(a.degree + 1);
    if a.is_zero() {
        return out;
    }
    for &cube in complex.cubes_of_dim(a.degree + 1) {
        let v: i64 = cube_boundary(complex, cube).iter().map(|&(f, s)| a.get(f) * s).sum();
        out.add_at(cube, v);
    }
    out
}

/// ⟨α, c⟩; zero when degrees differ.
pub fn evaluate(a: &IntCochain, c: &IntChain) -> i64 {
    if a.degree != c.degree {
        return 0;
    }
    c.iter().fold(0i64, |acc, (cube, x)| checked(acc.checked_add(checked(x.checked_mul(a.get(cube))))))
}

/// One summand sh(v)·v⁻ ⊗ v⁺ of the Serre diagonal of a cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalTerm {
    pub vertex: VertexSet,
    pub left: CubeId,
    pub right: CubeId,
    pub left_face: FacePartition,
    pub right_face: FacePartition,
    pub sign: Sign,
}

/// Δ(σ) = Σ_v sh(v)·v⁻ ⊗ v⁺ over the 2^d vertices of the cube.
pub fn serre_diagonal(complex: &CubicalComplex, cube: CubeId) -> Vec<DiagonalTerm> {
    let d = complex.dim(cube);
    VertexSet::all(d)
        .expect("dimension within range")
        .into_iter()
        .map(|v| {
            let (l, r) = v.as_face().decomposition();
            DiagonalTerm {
                vertex: v,
                left: complex.face_cube(cube, &l),
                right: complex.face_cube(cube, &r),
                left_face: l,
                right_face: r,
                sign: shuffle_sign(&v.as_face()),
            }
        })
        .collect()
}

/// (α ⌣ β)(E) = Σ sh(v)·α(v⁻)·β(v⁺), summed over vertices with |v| = |α|.
pub fn cup(complex: &CubicalComplex, a: &IntCochain, b: &IntCochain) -> IntCochain {
    let (p, q) = (a.degree, b.degree);
    let mut out = IntCochain::zero(p + q);
    if a.is_zero() || b.is_zero() {
        return out;
    }
    for &e in complex.cubes_of_dim(p + q) {
        let mut total = 0i64;
        for v in VertexSet::all(p + q).expect("dimension within range") {
            if v.weight() != p {
                continue;
            }
            let (l, r) = v.as_face().decomposition();
            let x = a.get(complex.face_cube(e, &l));
            if x == 0 {
                continue;
            }
            let y = b.get(complex.face_cube(e, &r));
            let term = checked(x.checked_mul(y)) * shuffle_sign(&v.as_face()).to_i64();
            total = checked(total.checked_add(term));
        }
        out.add_at(e, total);
    }
    out
}

/// Matrix of δ: C^d → C^{d+1} (rows: (d+1)-cubes, columns: d-cubes).
pub fn coboundary_matrix(complex: &CubicalComplex, d: usize) -> Vec<Vec<i64>> {
    let cols = complex.cubes_of_dim(d);
    let pos: std::collections::HashMap<CubeId, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    complex
        .cubes_of_dim(d + 1)
        .iter()
        .map(|&cube| {
            let mut row = vec![0i64; cols.len()];
            for (f, s) in cube_boundary(complex, cube) {
                row[pos[&f]] += s;
            }
            row
        })
        .collect()
}

/// H^d as free rank plus torsion coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

pub fn cohomology(complex: &CubicalComplex) -> Vec<CohomologyGroup> {
    let top = complex.top_dim();
    let mut ranks = Vec::with_capacity(top + 1);
    let mut torsions = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let m = coboundary_matrix(complex, d);
        let s = smith_normal_form(&m, complex.cubes_of_dim(d).len(), false);
        ranks.push(s.rank);
        torsions.push(s.torsion());
    }
    (0..=top)
        .map(|d| {
            let n = complex.cubes_of_dim(d).len();
            let below = if d == 0 { 0 } else { ranks[d - 1] };
            CohomologyGroup {
                degree: d,
                betti: n - ranks[d] - below,
                torsion: if d == 0 { vec![] } else { torsions[d - 1].clone() },
            }
        })
        .collect()
}

fn to_i64_vec(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("generator coefficient fits in i64")).collect()
}

/// Cocycles representing a basis of the free part of H^d.
pub fn cohomology_generators(complex: &CubicalComplex, d: usize) -> Vec<IntCochain> {
    let nd = complex.cubes_of_dim(d).len();
    if nd == 0 {
        return vec![];
    }
    let b = coboundary_matrix(complex, d);
    let sb = smith_normal_form(&b, nd, true);
    let v = sb.v.as_ref().expect("transforms requested");
    let v_inv = sb.v_inv.as_ref().expect("transforms requested");
    let r = sb.rank;
    let k = nd - r;
    // Columns r.. of v span ker δ_d.
    let kernel: Vec<Vec<BigInt>> = (r..nd).map(|j| (0..nd).map(|i| v[i][j].clone()).collect()).collect();
    // Image of δ_{d-1} in kernel coordinates.
    let x: Vec<Vec<BigInt>> = if d == 0 {
        vec![vec![]; k]
    } else {
        let a = coboundary_matrix(complex, d - 1);
        let na = complex.cubes_of_dim(d - 1).len();
        (r..nd)
            .map(|row| {
                (0..na)
                    .map(|col| (0..nd).map(|i| &v_inv[row][i] * BigInt::from(a[i][col])).sum())
                    .collect()
            })
            .collect()
    };
    let ncols = x.first().map_or(0, |r| r.len());
    let sx = smith_normal_form_big(&x, ncols, true);
    let u_inv = sx.u_inv.as_ref().expect("transforms requested");
    (sx.rank..k)
        .map(|j| {
            let coeffs: Vec<BigInt> =
                (0..nd).map(|i| (0..k).map(|l| &kernel[l][i] * &u_inv[l][j]).sum::<BigInt>()).collect();
            IntCochain::from_dense(complex, d, &to_i64_vec(&coeffs))
        })
        .collect()
}

/// The sum of all top cubes; a cycle when the cubes are coherently oriented.
pub fn fundamental_chain(complex: &CubicalComplex) -> IntChain {
    let top = complex.top_dim();
    IntChain::from_pairs(complex, top, complex.cubes_of_dim(top).iter().map(|&c| (c, 1))).expect("top cubes")
}
