//! The logistic vector field x ↦ Σ xᵢ(1−xᵢ)eᵢ on the unit cube and its
//! closed-form flow.
//!
//! All evaluations go through the form f_t(x) = x / (x + (1−x)e^{−t}),
//! which never exponentiates a positive argument for t ≥ 0 and is mirrored
//! for t < 0, so large |t| saturates instead of overflowing.

use serde::{Deserialize, Serialize};

use crate::complex::CubicalComplex;
use crate::cube::{bits, FacePartition, VertexSet};
use crate::error::GeoError;
use crate::geometry::{GeoCochain, GraphPiece};

/// Beyond this |t| the exponentials are clamped.
pub const SATURATION_T: f64 = 700.0;

fn clamp_t(t: f64) -> f64 {
    t.clamp(-SATURATION_T, SATURATION_T)
}

pub fn vector_field(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&xi| xi * (1.0 - xi)).collect()
}

/// One coordinate of the time-t flow.
pub fn flow_scalar(x: f64, t: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 || t == 0.0 {
        return x;
    }
    let t = clamp_t(t);
    if t > 0.0 {
        let e = (-t).exp();
        x / (x + (1.0 - x) * e)
    } else {
        let e = t.exp();
        let num = x * e;
        num / (num + (1.0 - x))
    }
}

/// Diagonal Jacobian entry e^t / (x(e^t − 1) + 1)², rewritten so that only
/// non-positive exponents are evaluated.
pub fn jacobian_scalar(x: f64, t: f64) -> f64 {
    let t = clamp_t(t);
    if t >= 0.0 {
        let e = (-t).exp();
        let d = x + (1.0 - x) * e;
        e / (d * d)
    } else {
        let e = t.exp();
        let d = (1.0 - x) + x * e;
        e / (d * d)
    }
}

pub fn flow_point(x: &[f64], t: f64) -> Vec<f64> {
    x.iter().map(|&xi| flow_scalar(xi, t)).collect()
}

pub fn flow_inverse(y: &[f64], t: f64) -> Vec<f64> {
    flow_point(y, -t)
}

pub fn flow_jacobian(x: &[f64], t: f64) -> Vec<f64> {
    x.iter().map(|&xi| jacobian_scalar(xi, t)).collect()
}

/// Limits of the flow line through x as t → −∞ and t → +∞.
pub fn flow_limits(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let minus = x.iter().map(|&xi| if xi >= 1.0 { 1.0 } else { 0.0 }).collect();
    let plus = x.iter().map(|&xi| if xi <= 0.0 { 0.0 } else { 1.0 }).collect();
    (minus, plus)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Lower,
    Upper,
}

/// N_ε L_u(F) or N_ε U_u(F).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionSpec {
    pub face: FacePartition,
    pub kind: RegionKind,
    pub u: f64,
    pub eps: f64,
}

impl RegionSpec {
    pub fn contains(&self, x: &[f64]) -> bool {
        free_ok(&self.face, self.kind, self.u, x) && in_neighborhood(&self.face, self.eps, x)
    }

    /// Deterministic grid of `per_axis` values per coordinate.  Bound
    /// coordinates sample [0, ε) or (1−ε, 1]; free ones [0, u] or [u, 1].
    pub fn sample(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let n = self.face.n();
        let k = per_axis.max(2);
        let mut axes: Vec<Vec<f64>> = Vec::with_capacity(n);
        for i in 0..n {
            let bit = 1u32 << i;
            let vals: Vec<f64> = if self.face.f0() & bit != 0 {
                (0..k).map(|j| self.eps * j as f64 / k as f64).collect()
            } else if self.face.f1() & bit != 0 {
                (0..k).map(|j| 1.0 - self.eps * j as f64 / k as f64).collect()
            } else {
                let (lo, hi) = match self.kind {
                    RegionKind::Lower => (0.0, self.u),
                    RegionKind::Upper => (self.u, 1.0),
                };
                (0..k).map(|j| (lo + (hi - lo) * j as f64 / (k - 1) as f64).min(hi)).collect()
            };
            axes.push(vals);
        }
        cartesian(&axes)
    }
}

fn free_ok(face: &FacePartition, kind: RegionKind, u: f64, x: &[f64]) -> bool {
    bits(face.f01()).all(|j| match kind {
        RegionKind::Lower => x[j] <= u,
        RegionKind::Upper => x[j] >= u,
    })
}

/// The L^∞ neighborhood N_ε(F): bound coordinates within ε of F's values.
pub fn in_neighborhood(face: &FacePartition, eps: f64, x: &[f64]) -> bool {
    bits(face.f0()).all(|j| x[j] < eps) && bits(face.f1()).all(|j| x[j] > 1.0 - eps)
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for vals in axes {
        let mut next = Vec::with_capacity(out.len() * vals.len());
        for p in &out {
            for &v in vals {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Does every sample of N_r U_u(F) land in N_ε(F⁺) after flowing by t
/// (or, for a lower region, every sample of N_r L_u(F) in N_ε(F⁻) after
/// flowing by −t)?
pub fn region_maps_into(region: &RegionSpec, eps: f64, t: f64, per_axis: usize) -> bool {
    let (minus, plus) = region.face.decomposition();
    let (target, tt) = match region.kind {
        RegionKind::Upper => (plus, t),
        RegionKind::Lower => (minus, -t),
    };
    region
        .sample(per_axis)
        .iter()
        .all(|x| in_neighborhood(&target, eps, &flow_point(x, tt)))
}

/// Smallest t ≥ 0 (to within `resolution`) from which `region_maps_into`
/// holds.  The predicate is monotone in t because the flow is order
/// preserving, so bisection is sound.  None if even `t_max` fails.
pub fn region_flow_threshold(region: &RegionSpec, eps: f64, per_axis: usize, t_max: f64, resolution: f64) -> Option<f64> {
    if region_maps_into(region, eps, 0.0, per_axis) {
        return Some(0.0);
    }
    if !region_maps_into(region, eps, t_max, per_axis) {
        return None;
    }
    let (mut lo, mut hi) = (0.0, t_max);
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if region_maps_into(region, eps, mid, per_axis) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Largest ratio |Df_t|ᵢᵢ / |Df_t|ⱼⱼ over samples y ∈ N_δ L_u(F⁺), where
/// x = f_{−t}(y), i ∉ F⁺₀₁ and j ∈ F⁺₀₁.  Returns 0 when either index set
/// is empty.
pub fn jacobian_ratio_probe(face: &FacePartition, u: f64, delta: f64, t: f64, per_axis: usize) -> f64 {
    let (_, plus) = face.decomposition();
    ratio_probe(&plus, RegionKind::Lower, u, delta, t, per_axis)
}

/// Backward counterpart: samples of N_δ U_u(F⁻) with x = f_t(y) and the
/// Jacobian of f_{−t}.
pub fn jacobian_ratio_probe_backward(face: &FacePartition, u: f64, delta: f64, t: f64, per_axis: usize) -> f64 {
    let (minus, _) = face.decomposition();
    ratio_probe(&minus, RegionKind::Upper, u, delta, -t, per_axis)
}

fn ratio_probe(target: &FacePartition, kind: RegionKind, u: f64, delta: f64, t: f64, per_axis: usize) -> f64 {
    let free: Vec<usize> = bits(target.f01()).collect();
    let bound: Vec<usize> = bits(target.bound()).collect();
    if free.is_empty() || bound.is_empty() {
        return 0.0;
    }
    let region = RegionSpec { face: *target, kind, u, eps: delta };
    let mut worst: f64 = 0.0;
    for y in region.sample(per_axis) {
        let x = flow_inverse(&y, t);
        let jac = flow_jacobian(&x, t);
        for &i in &bound {
            for &j in &free {
                worst = worst.max(jac[i].abs() / jac[j].abs());
            }
        }
    }
    worst
}

/// For the terminal face F = v⁺ and D = L_{u_d}(F) with u_d ≥ u, checks on
/// a sample grid that L_u(F) ⊆ f_t(D), i.e. f_{−t}(y) ∈ D for sampled y.
/// With `initial` set, the mirrored statement for F = v⁻, D = U_{u_d}(F)
/// with u_d ≤ u and U_u(F) ⊆ f_{−t}(D).
pub fn domain_flow_probe(v: &VertexSet, u: f64, u_d: f64, t: f64, per_axis: usize, initial: bool) -> bool {
    let (minus, plus) = v.as_face().decomposition();
    let (face, kind, tt) = if initial { (minus, RegionKind::Upper, t) } else { (plus, RegionKind::Lower, -t) };
    let region = RegionSpec { face, kind, u, eps: 0.5 };
    region.sample(per_axis).into_iter().all(|mut y| {
        for (j, val) in face.bound_axes() {
            y[j] = val;
        }
        let x = flow_point(&y, tt);
        let on_face = face.bound_axes().iter().all(|&(j, val)| x[j] == val);
        on_face && free_ok(&face, kind, u_d, &x)
    })
}

/// Probe parameters shared by tests and the acceptance suite.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProbeConfig {
    pub eps: Vec<f64>,
    pub u: Vec<f64>,
    pub r: Vec<f64>,
    pub ratio_eps: Vec<f64>,
    pub ratio_delta: f64,
    pub ratio_u: f64,
    pub samples_per_axis: usize,
    pub t_max: f64,
    pub t_resolution: f64,
}

pub const DEFAULT_PROBES: &str = include_str!("../config/lemma_probes.toml");

impl ProbeConfig {
    pub fn from_toml(s: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(s)
    }
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self::from_toml(DEFAULT_PROBES).expect("bundled probe config parses")
    }
}


/// A graph piece seen through f_t. The base mesh is kept and the flow is
/// composed analytically, so no resampling error enters.
#[derive(Clone, Copy, Debug)]
pub struct FlowedPiece<'a> {
    pub base: &'a GraphPiece,
    pub t: f64,
}

pub fn flow_piece(p: &GraphPiece, t: f64) -> FlowedPiece<'_> {
    FlowedPiece { base: p, t }
}

impl FlowedPiece<'_> {
    /// f_t of the point of `cell` with barycentric weights `mu` on nodes
    /// 1..=m (node 0 takes the remainder).
    pub fn carrier_point(&self, cell: usize, mu: &[f64]) -> Vec<f64> {
        let c = &self.base.cells()[cell];
        let nodes = self.base.nodes();
        let mut x = nodes[c[0]].clone();
        for (k, &w) in c[1..].iter().zip(mu) {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += w * (nodes[*k][i] - nodes[c[0]][i]);
            }
        }
        flow_point(&x, self.t)
    }

    /// y_A ↦ f_t(g(f_{−t}(y_A))): the flowed carrier as a graph over the
    /// same base axes, returned as a full point.
    pub fn graph_value(&self, y_base: &[f64]) -> Option<Vec<f64>> {
        let x_base: Vec<f64> = y_base.iter().map(|&y| flow_scalar(y, -self.t)).collect();
        self.base.graph_at(&x_base).map(|x| flow_point(&x, self.t))
    }
}

/// The flowed view f_t(W); intersections are computed on the exact flowed
/// carrier.
pub fn flow_cochain(w: &GeoCochain, t: f64) -> GeoCochain {
    w.flowed(t)
}

/// A plain cochain whose nodes are f_t of a refined copy of W's mesh, for
/// inspection and export. Segments are split into `refine` parts and
/// triangles into `refine`² parts; other cells are flowed as they are.
pub fn sample_flowed(complex: &CubicalComplex, w: &GeoCochain, refine: usize) -> Result<GeoCochain, GeoError> {
    let k = refine.max(1);
    let mut pieces = Vec::with_capacity(w.pieces().len());
    for p in w.pieces() {
        let (mut nodes, mut cells): (Vec<Vec<f64>>, Vec<Vec<usize>>) = (Vec::new(), Vec::new());
        for ci in 0..p.cells().len() {
            let fp = flow_piece(p, w.time());
            let m = p.dim();
            match m {
                1 => {
                    let start = nodes.len();
                    for s in 0..=k {
                        nodes.push(fp.carrier_point(ci, &[s as f64 / k as f64]));
                    }
                    cells.extend((0..k).map(|s| vec![start + s, start + s + 1]));
                }
                2 => {
                    let mut map = vec![vec![0usize; k + 1]; k + 1];
                    for i in 0..=k {
                        for j in 0..=(k - i) {
                            map[i][j] = nodes.len();
                            nodes.push(fp.carrier_point(ci, &[i as f64 / k as f64, j as f64 / k as f64]));
                        }
                    }
                    for i in 0..k {
                        for j in 0..(k - i) {
                            cells.push(vec![map[i][j], map[i + 1][j], map[i][j + 1]]);
                            if j + 1 < k - i {
                                cells.push(vec![map[i + 1][j], map[i + 1][j + 1], map[i][j + 1]]);
                            }
                        }
                    }
                }
                _ => {
                    let start = nodes.len();
                    for &n in &p.cells()[ci] {
                        nodes.push(flow_point(&p.nodes()[n], w.time()));
                    }
                    cells.push((start..start + m + 1).collect());
                }
            }
        }
        pieces.push(GraphPiece::new(p.cube(), p.ambient(), p.base_axes().to_vec(), nodes, cells, p.normal_sign())?);
    }
    GeoCochain::new(complex, w.codim(), pieces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert!((flow_scalar(0.5, 3f64.ln()) - 0.75).abs() < 1e-15);
        assert!((flow_scalar(0.75, -(3f64.ln())) - 0.5).abs() < 1e-15);
        assert_eq!(flow_scalar(0.0, 50.0), 0.0);
        assert_eq!(flow_scalar(1.0, -50.0), 1.0);
        assert_eq!(vector_field(&[0.5, 0.0, 1.0]), vec![0.25, 0.0, 0.0]);
        assert!((jacobian_scalar(0.0, 2.0) - 2f64.exp()).abs() < 1e-12);
        assert!((jacobian_scalar(1.0, 2.0) - (-2f64).exp()).abs() < 1e-15);
        assert_eq!(jacobian_scalar(0.3, 0.0), 1.0);
    }

    #[test]
    fn saturates() {
        let y = flow_scalar(0.5, 1e6);
        assert!(y.is_finite() && y == 1.0);
        let y = flow_scalar(0.5, -1e6);
        assert!(y.is_finite() && y >= 0.0 && y < 1e-300);
        assert!(jacobian_scalar(0.5, 1e6).is_finite());
    }

    #[test]
    fn limits() {
        assert_eq!(flow_limits(&[0.3, 0.0]), (vec![0.0, 0.0], vec![1.0, 0.0]));
        assert_eq!(flow_limits(&[0.5, 1.0]), (vec![0.0, 1.0], vec![1.0, 1.0]));
        assert_eq!(flow_limits(&[1.0, 0.0]), (vec![1.0, 0.0], vec![1.0, 0.0]));
    }

    #[test]
    fn default_config_loads() {
        let c = ProbeConfig::default();
        assert!(!c.eps.is_empty() && c.samples_per_axis >= 2);
    }

    #[test]
    fn region_membership() {
        let f = FacePartition::new(3, &[], &[2, 3], &[1]).unwrap();
        let r = RegionSpec { face: f, kind: RegionKind::Lower, u: 0.4, eps: 0.1 };
        assert!(r.contains(&[0.95, 0.2, 0.4]));
        assert!(!r.contains(&[0.95, 0.5, 0.1]));
        assert!(!r.contains(&[0.85, 0.1, 0.1]));
        assert!(r.sample(4).iter().all(|x| r.contains(x)));
    }
}
