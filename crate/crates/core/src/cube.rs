//! Combinatorics of the standard n-cube.
//!
//! Coordinate indices are 1-based at the public boundary and stored as
//! 0-based bits internally. A face is a partition of the coordinates into
//! those pinned to 0, those that are free, and those pinned to 1.

use std::fmt;
use std::ops::{Mul, Neg};

use crate::error::CubeError;

/// Largest supported ambient dimension (bitset width).
pub const MAX_DIM: usize = 16;

#[inline]
fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn mask_from_indices(n: usize, idx: &[usize]) -> Result<u32, CubeError> {
    let mut m = 0u32;
    for &i in idx {
        if i == 0 || i > n {
            return Err(CubeError::IndexOutOfRange { index: i, n });
        }
        m |= 1 << (i - 1);
    }
    Ok(m)
}

/// Ascending 0-based positions of the set bits of `m`.
pub fn bits(m: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| m >> i & 1 == 1)
}

/// Scatter the low bits of `src` into the set positions of `mask`, in order.
pub fn deposit(src: u32, mask: u32) -> u32 {
    let mut out = 0;
    for (k, i) in bits(mask).enumerate() {
        if src >> k & 1 == 1 {
            out |= 1 << i;
        }
    }
    out
}

/// Gather the bits of `src` at the set positions of `mask` into the low bits.
pub fn extract(src: u32, mask: u32) -> u32 {
    let mut out = 0;
    for (k, i) in bits(mask).enumerate() {
        if src >> i & 1 == 1 {
            out |= 1 << k;
        }
    }
    out
}

/// A sign in the multiplicative group {+1, -1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }

    /// Sign of a nonzero real; `None` for zero or NaN.
    pub fn of_f64(x: f64) -> Option<Sign> {
        if x > 0.0 {
            Some(Sign::Pos)
        } else if x < 0.0 {
            Some(Sign::Neg)
        } else {
            None
        }
    }

    pub fn from_i64(x: i64) -> Option<Sign> {
        match x {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.to_i64() as f64
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Neg
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+1",
            Sign::Neg => "-1",
        })
    }
}

/// A vertex of the n-cube, identified with the set of coordinates equal to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    n: u8,
    ones: u32,
}

impl VertexSet {
    /// Build from 1-based coordinate indices.
    pub fn new(n: usize, ones: &[usize]) -> Result<Self, CubeError> {
        check_dim(n)?;
        Ok(VertexSet { n: n as u8, ones: mask_from_indices(n, ones)? })
    }

    pub fn from_mask(n: usize, ones: u32) -> Result<Self, CubeError> {
        check_dim(n)?;
        if ones & !full_mask(n) != 0 {
            return Err(CubeError::MaskOutOfRange { n });
        }
        Ok(VertexSet { n: n as u8, ones })
    }

    pub fn initial(n: usize) -> Result<Self, CubeError> {
        Self::from_mask(n, 0)
    }

    pub fn terminal(n: usize) -> Result<Self, CubeError> {
        Self::from_mask(n, full_mask(n))
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u32 {
        self.ones
    }

    /// Number of coordinates equal to 1.
    pub fn weight(&self) -> usize {
        self.ones.count_ones() as usize
    }

    /// 1-based indices of coordinates equal to 1.
    pub fn ones(&self) -> Vec<usize> {
        bits(self.ones).map(|i| i + 1).collect()
    }

    pub fn leq(&self, other: &VertexSet) -> bool {
        self.n == other.n && self.ones & !other.ones == 0
    }

    /// The vertex as a degenerate face.
    pub fn as_face(&self) -> FacePartition {
        FacePartition { n: self.n, f0: full_mask(self.n()) & !self.ones, f01: 0, f1: self.ones }
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n()).map(|i| (self.ones >> i & 1) as f64).collect()
    }

    /// All 2^n vertices in binary-counting order.
    pub fn all(n: usize) -> Result<Vec<VertexSet>, CubeError> {
        check_dim(n)?;
        Ok((0..1u32 << n).map(|m| VertexSet { n: n as u8, ones: m }).collect())
    }
}

fn check_dim(n: usize) -> Result<(), CubeError> {
    if n > MAX_DIM {
        Err(CubeError::DimensionTooLarge { n, max: MAX_DIM })
    } else {
        Ok(())
    }
}

/// A face (F0, F01, F1) of the standard n-cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacePartition {
    n: u8,
    f0: u32,
    f01: u32,
    f1: u32,
}

impl FacePartition {
    /// Build from 1-based index sets; they must partition {1..n}.
    pub fn new(n: usize, f0: &[usize], f01: &[usize], f1: &[usize]) -> Result<Self, CubeError> {
        check_dim(n)?;
        Self::from_masks(
            n,
            mask_from_indices(n, f0)?,
            mask_from_indices(n, f01)?,
            mask_from_indices(n, f1)?,
        )
    }

    pub fn from_masks(n: usize, f0: u32, f01: u32, f1: u32) -> Result<Self, CubeError> {
        check_dim(n)?;
        let all = full_mask(n);
        if f0 & f01 != 0 || f0 & f1 != 0 || f01 & f1 != 0 || (f0 | f01 | f1) != all {
            return Err(CubeError::NotAPartition { n });
        }
        Ok(FacePartition { n: n as u8, f0, f01, f1 })
    }

    /// The full cube, every coordinate free.
    pub fn full(n: usize) -> Result<Self, CubeError> {
        Self::from_masks(n, 0, full_mask(n), 0)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }
    pub fn dim(&self) -> usize {
        self.f01.count_ones() as usize
    }
    pub fn f0(&self) -> u32 {
        self.f0
    }
    pub fn f01(&self) -> u32 {
        self.f01
    }
    pub fn f1(&self) -> u32 {
        self.f1
    }
    pub fn bound(&self) -> u32 {
        self.f0 | self.f1
    }

    /// 0-based free axes, ascending.
    pub fn free_axes(&self) -> Vec<usize> {
        bits(self.f01).collect()
    }

    /// 0-based bound axes with their pinned values, ascending.
    pub fn bound_axes(&self) -> Vec<(usize, f64)> {
        bits(self.bound()).map(|i| (i, (self.f1 >> i & 1) as f64)).collect()
    }

    pub fn is_vertex(&self) -> bool {
        self.f01 == 0
    }
    pub fn is_initial(&self) -> bool {
        self.f1 == 0
    }
    pub fn is_terminal(&self) -> bool {
        self.f0 == 0
    }

    pub fn initial_vertex(&self) -> VertexSet {
        VertexSet { n: self.n, ones: self.f1 }
    }

    pub fn terminal_vertex(&self) -> VertexSet {
        VertexSet { n: self.n, ones: self.f1 | self.f01 }
    }

    /// Vertex of the face with local index `s` (binary counting over the free axes).
    pub fn vertex(&self, s: u32) -> VertexSet {
        VertexSet { n: self.n, ones: self.f1 | deposit(s, self.f01) }
    }

    /// The 2^dim vertices of the face in binary-counting order.
    pub fn vertices(&self) -> Vec<VertexSet> {
        (0..1u32 << self.dim()).map(|s| self.vertex(s)).collect()
    }

    pub fn contains_vertex(&self, v: &VertexSet) -> bool {
        v.ones & self.f0 == 0 && v.ones & self.f1 == self.f1
    }

    /// `self` is a face of `other`.
    pub fn is_face_of(&self, other: &FacePartition) -> bool {
        self.n == other.n && self.f01 & !other.f01 == 0 && other.f0 & !self.f0 == 0 && other.f1 & !self.f1 == 0
    }

    /// The face of `self` obtained by pinning local free axis `k` (0-based
    /// position among the free axes) to `eps`.
    pub fn pin_local(&self, k: usize, eps: bool) -> FacePartition {
        let axis = bits(self.f01).nth(k).expect("local axis in range");
        self.pin(axis, eps)
    }

    /// Pin 0-based global axis `axis` (must be free) to `eps`.
    pub fn pin(&self, axis: usize, eps: bool) -> FacePartition {
        let b = 1 << axis;
        debug_assert!(self.f01 & b != 0);
        let mut f = *self;
        f.f01 &= !b;
        if eps {
            f.f1 |= b;
        } else {
            f.f0 |= b;
        }
        f
    }

    /// Position of this face inside `outer`, as a partition of the free
    /// coordinates of `outer` (the face seen in `outer`'s own cube).
    pub fn relative_to(&self, outer: &FacePartition) -> Result<FacePartition, CubeError> {
        if !self.is_face_of(outer) {
            return Err(CubeError::NotAFace);
        }
        let m = outer.f01;
        FacePartition::from_masks(outer.dim(), extract(self.f0, m), extract(self.f01, m), extract(self.f1, m))
    }

    /// Inverse of `relative_to`: a face of `outer`'s cube, given in its local
    /// coordinates, expressed in the ambient cube.
    pub fn embed_in(&self, outer: &FacePartition) -> Result<FacePartition, CubeError> {
        if self.n() != outer.dim() {
            return Err(CubeError::DimensionMismatch);
        }
        let m = outer.f01;
        FacePartition::from_masks(
            outer.n(),
            outer.f0 | deposit(self.f0, m),
            deposit(self.f01, m),
            outer.f1 | deposit(self.f1, m),
        )
    }

    /// (F⁻, F⁺): F⁻ = (F0 ∪ F01, F1, ∅) and F⁺ = (∅, F0, F1 ∪ F01).
    pub fn decomposition(&self) -> (FacePartition, FacePartition) {
        let minus = FacePartition { n: self.n, f0: self.f0 | self.f01, f01: self.f1, f1: 0 };
        let plus = FacePartition { n: self.n, f0: 0, f01: self.f0, f1: self.f1 | self.f01 };
        (minus, plus)
    }

    /// Coordinates of the barycentre.
    pub fn center(&self) -> Vec<f64> {
        (0..self.n())
            .map(|i| {
                if self.f01 >> i & 1 == 1 {
                    0.5
                } else {
                    (self.f1 >> i & 1) as f64
                }
            })
            .collect()
    }
}

impl fmt::Display for FacePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |m: u32| bits(m).map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({{{}}},{{{}}},{{{}}})", show(self.f0), show(self.f01), show(self.f1))
    }
}

/// The face spanned by the interval [v, w]: Fε = {i | vᵢ = wᵢ = ε}.
pub fn face_from_interval(v: &VertexSet, w: &VertexSet) -> Result<FacePartition, CubeError> {
    if v.n != w.n || !v.leq(w) {
        return Err(CubeError::NotAnInterval);
    }
    let all = full_mask(v.n());
    Ok(FacePartition { n: v.n, f0: all & !w.ones, f01: w.ones & !v.ones, f1: v.ones })
}

/// (F⁻, F⁺) as a free function.
pub fn face_decomposition(f: &FacePartition) -> (FacePartition, FacePartition) {
    f.decomposition()
}

/// (v⁻, v⁺) for a vertex.
pub fn vertex_decomposition(v: &VertexSet) -> (FacePartition, FacePartition) {
    v.as_face().decomposition()
}

/// Witness vertex when (F, G) is a reciprocal pair, i.e. F = v⁻ and G = v⁺.
pub fn reciprocal_witness(f: &FacePartition, g: &FacePartition) -> Option<VertexSet> {
    if f.n != g.n || !f.is_initial() || !g.is_terminal() {
        return None;
    }
    let (_, plus) = f.decomposition();
    if plus == *g {
        Some(f.terminal_vertex())
    } else {
        None
    }
}

pub fn is_reciprocal(f: &FacePartition, g: &FacePartition) -> bool {
    reciprocal_witness(f, g).is_some()
}

/// Parity of a permutation given as a sequence of distinct values,
/// via cycle decomposition.
pub(crate) fn permutation_sign(seq: &[usize]) -> Sign {
    let mut sorted: Vec<usize> = seq.to_vec();
    sorted.sort_unstable();
    let pos: Vec<usize> = seq.iter().map(|x| sorted.binary_search(x).unwrap()).collect();
    let mut seen = vec![false; pos.len()];
    let mut odd = false;
    for start in 0..pos.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = pos[j];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    Sign::from_parity(odd)
}

/// sh(F): parity of (free axes of F⁻, of F, of F⁺) against (1..n).
pub fn shuffle_sign(f: &FacePartition) -> Sign {
    let (minus, plus) = f.decomposition();
    let seq: Vec<usize> = bits(minus.f01).chain(bits(f.f01)).chain(bits(plus.f01)).collect();
    permutation_sign(&seq)
}

/// δ_i^ε: insert coordinate ε at 1-based slot `i`, mapping a vertex of Iⁿ⁻¹ into Iⁿ.
pub fn face_inclusion_vertex(i: usize, eps: bool, v: &VertexSet) -> Result<VertexSet, CubeError> {
    let n = v.n() + 1;
    check_dim(n)?;
    if i == 0 || i > n {
        return Err(CubeError::IndexOutOfRange { index: i, n });
    }
    let k = i - 1;
    let low = v.ones & ((1 << k) - 1);
    let high = (v.ones >> k) << (k + 1);
    let mid = if eps { 1 << k } else { 0 };
    Ok(VertexSet { n: n as u8, ones: low | mid | high })
}

/// All faces of Iⁿ (3ⁿ of them), or those of dimension `d`. Ordered by
/// dimension, then by free set, then by the pinned values.
pub fn enumerate_faces(n: usize, d: Option<usize>) -> Result<Vec<FacePartition>, CubeError> {
    check_dim(n)?;
    if let Some(d) = d {
        if d > n {
            return Err(CubeError::DimensionOutOfRange { d, n });
        }
    }
    let all = full_mask(n);
    let mut out = Vec::new();
    for dim in 0..=n {
        if d.is_some_and(|d| d != dim) {
            continue;
        }
        for free in 0..=all {
            if free.count_ones() as usize != dim {
                continue;
            }
            let bound = all & !free;
            for s in 0..1u32 << bound.count_ones() {
                let f1 = deposit(s, bound);
                out.push(FacePartition { n: n as u8, f0: bound & !f1, f01: free, f1 });
            }
        }
    }
    Ok(out)
}
