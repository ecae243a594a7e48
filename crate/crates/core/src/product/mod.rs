//! Fiber products of flowed geometric cochains, counted cube by cube, and
//! their comparison with the cubical cup product.

pub mod fixtures;
mod reciprocal;
mod report;
mod roots;

pub use reciprocal::{face_pair_test, graph_like_cochain, reciprocal_threshold, reciprocal_unit_test, FacePairOutcome};
pub use report::{ComparisonReport, ComparisonRow, CSV_HEADER};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cochain::{cup, IntCochain};
use crate::complex::{CubeId, CubicalComplex};
use crate::cube::Sign;
use crate::error::GeoError;
use crate::geometry::linalg::{det, sigma_min, solve};
use crate::geometry::{intersect_cochain, GeoCochain, SignedPoint, SignedPointSet, RANK_TOL};
use roots::{find_roots, FlowCell};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductConfig {
    pub t_grid: Vec<f64>,
    /// Residual bound for Newton polishing.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub depth_cap: usize,
    pub leaf_width: f64,
    /// Roots closer than this (in y and in both preimages) are merged, and
    /// roots this close to the boundary of the cube are rejected.
    pub merge_radius: f64,
    pub max_leaves: usize,
}

impl Default for ProductConfig {
    fn default() -> Self {
        Self {
            t_grid: (0..=10).map(f64::from).collect(),
            newton_tol: 1e-11,
            newton_max_iter: 60,
            depth_cap: 40,
            leaf_width: 2f64.powi(-36),
            merge_radius: 1e-8,
            max_leaves: 200_000,
        }
    }
}

impl ProductConfig {
    pub fn with_grid(t_grid: Vec<f64>) -> Self {
        Self { t_grid, ..Self::default() }
    }

    pub fn check(&self) -> Result<(), GeoError> {
        if self.t_grid.is_empty() || self.t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GeoError::Schema("t grid must be nonempty and strictly ascending".into()));
        }
        if !(self.newton_tol > 0.0 && self.merge_radius > 0.0 && self.leaf_width > 0.0) {
            return Err(GeoError::Schema("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Points of Wt ∩ Vt inside the top cube `e`, each signed by the fiber
/// product co-orientation (W's normal data first, then V's).
///
/// With P = Wt ×_M Vt a point, its normal space is all of T_yM and the
/// isomorphism T_yM ≅ N_W ⊕ N_V sends a normal vector n of W to the unique
/// a ∈ T V with a ≡ n mod T W, and a normal vector n' of V to the unique
/// b ∈ T W with b ≡ n' mod T V. The sign is that of det[a… | b…] against
/// the cube's orientation.
pub fn fiber_product_points(
    complex: &CubicalComplex,
    wt: &GeoCochain,
    vt: &GeoCochain,
    e: CubeId,
    cfg: &ProductConfig,
) -> Result<SignedPointSet, GeoError> {
    let d = complex.top_dim();
    if complex.dim(e) != d {
        return Err(GeoError::Schema(format!("fiber products are counted on top cubes; cube {e} has dimension {}", complex.dim(e))));
    }
    if wt.codim() + vt.codim() != d {
        return Err(GeoError::Schema(format!(
            "codimensions {} + {} must add up to the dimension {d}",
            wt.codim(),
            vt.codim()
        )));
    }
    let (ws, vs) = (cells_in(wt, e), cells_in(vt, e));
    let roots = find_roots(&ws, &vs, d, cfg)?;
    let mut kept: Vec<(roots::Root, Sign)> = Vec::new();
    for r in roots {
        let near = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= cfg.merge_radius);
        let (wc, vc) = (&ws[r.w_cell], &vs[r.v_cell]);
        let fail = |reason: &str| GeoError::Degenerate { cube: e, point: r.y.clone(), reason: reason.to_string() };
        if r.y.iter().any(|&y| y < cfg.merge_radius || y > 1.0 - cfg.merge_radius) {
            return Err(fail("intersection point on the boundary of the cube"));
        }
        let tw = wc.tangent_at(&r.xw);
        let tv = vc.tangent_at(&r.xv);
        let mut both = tw.clone();
        both.extend(tv.iter().cloned());
        if sigma_min(&both, d) <= RANK_TOL {
            return Err(fail("carriers are not transverse here"));
        }
        let jw = crate::flow::flow_jacobian(&r.xw, wc.t);
        let jv = crate::flow::flow_jacobian(&r.xv, vc.t);
        let nw = wc.piece.normal_frame(Some(&jw));
        let nv = vc.piece.normal_frame(Some(&jv));
        let mut basis = tv.clone();
        basis.extend(tw.iter().cloned());
        let mut frame = Vec::with_capacity(d);
        for n in &nw {
            let c = solve(&basis, n).ok_or_else(|| fail("singular tangent splitting"))?;
            frame.push(lin(&tv, &c[..tv.len()], d));
        }
        for n in &nv {
            let c = solve(&basis, n).ok_or_else(|| fail("singular tangent splitting"))?;
            frame.push(lin(&tw, &c[tv.len()..], d));
        }
        let mut sign = Sign::of_f64(det(&frame)).ok_or_else(|| fail("degenerate normal frame"))?;
        if wc.piece.codim() == 0 {
            sign = sign * wc.piece.normal_sign();
        }
        if vc.piece.codim() == 0 {
            sign = sign * vc.piece.normal_sign();
        }
        if let Some((_, s)) = kept.iter().find(|(k, _)| near(&k.y, &r.y) && near(&k.xw, &r.xw) && near(&k.xv, &r.xv)) {
            if *s != sign {
                return Err(GeoError::InconsistentSigns { cube: e, point: r.y });
            }
            continue;
        }
        kept.push((r, sign));
    }
    let mut set = SignedPointSet::default();
    for (r, sign) in kept {
        let pieces = vec![ws[r.w_cell].piece_index, vs[r.v_cell].piece_index];
        set.points.push(SignedPoint {
            cube: e,
            coords: r.y.clone(),
            key: r.y.clone(),
            top_cube: e,
            ambient: r.y,
            sign,
            pieces,
        });
    }
    Ok(set)
}

fn cells_in(g: &GeoCochain, e: CubeId) -> Vec<FlowCell<'_>> {
    let mut out = Vec::new();
    for (pi, p) in g.pieces().iter().enumerate().filter(|(_, p)| p.cube() == e) {
        for ci in 0..p.cells().len() {
            out.push(FlowCell::new(p, pi, ci, g.time()));
        }
    }
    out
}

fn lin(cols: &[Vec<f64>], c: &[f64], d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d];
    for (col, &k) in cols.iter().zip(c) {
        for (o, x) in out.iter_mut().zip(col) {
            *o += k * x;
        }
    }
    out
}

/// cI(f_s(W) ×_M f_r(V)) for the flow times carried by the two views.
pub fn product_of_flowed(complex: &CubicalComplex, wt: &GeoCochain, vt: &GeoCochain, cfg: &ProductConfig) -> Result<IntCochain, GeoError> {
    let d = complex.top_dim();
    let deg = wt.codim() + vt.codim();
    if deg != d {
        return Err(GeoError::Schema(format!(
            "product cochains are implemented in the top degree {d} only (got {deg})"
        )));
    }
    let values: Vec<(CubeId, i64)> = complex
        .cubes_of_dim(d)
        .par_iter()
        .map(|&e| fiber_product_points(complex, wt, vt, e, cfg).map(|s| (e, s.signed_cardinality())))
        .collect::<Result<_, _>>()?;
    Ok(IntCochain::from_pairs(complex, deg, values.into_iter().filter(|&(_, n)| n != 0)).expect("top cubes"))
}

/// cI(f_t(W) ×_M f_{−t}(V)).
pub fn product_cochain(complex: &CubicalComplex, w: &GeoCochain, v: &GeoCochain, t: f64, cfg: &ProductConfig) -> Result<IntCochain, GeoError> {
    product_of_flowed(complex, &w.flowed(t), &v.flowed(-t), cfg)
}

/// Per-cube comparison at one t of
///   (1) cI(f_t W ×_M f_{−t} V) against cI(W) ⌣ cI(V), and
///   (2) cI(f_{−t} W ×_M f_t V) against (−1)^{|W||V|} cI(V) ⌣ cI(W).
/// A transversality failure yields rows flagged `transversality_ok = false`.
pub fn main_theorem_check(
    complex: &CubicalComplex,
    w: &GeoCochain,
    v: &GeoCochain,
    t: f64,
    cfg: &ProductConfig,
) -> Result<Vec<ComparisonRow>, GeoError> {
    let (ciw, civ) = (intersect_cochain(complex, w)?, intersect_cochain(complex, v)?);
    let cup1 = cup(complex, &ciw, &civ);
    let koszul = if (w.codim() * v.codim()).is_multiple_of(2) { 1 } else { -1 };
    let cup2 = cup(complex, &civ, &ciw).scale(koszul);
    rows_at(complex, w, v, t, cfg, &cup1, &cup2)
}

fn rows_at(
    complex: &CubicalComplex,
    w: &GeoCochain,
    v: &GeoCochain,
    t: f64,
    cfg: &ProductConfig,
    cup1: &IntCochain,
    cup2: &IntCochain,
) -> Result<Vec<ComparisonRow>, GeoError> {
    let p1 = product_of_flowed(complex, &w.flowed(t), &v.flowed(-t), cfg);
    let p2 = product_of_flowed(complex, &w.flowed(-t), &v.flowed(t), cfg);
    let transverse_error = |e: &GeoError| {
        matches!(e, GeoError::Degenerate { .. } | GeoError::InconsistentSigns { .. } | GeoError::RootFinder(_))
    };
    let (p1, p2, ok, note) = match (p1, p2) {
        (Ok(a), Ok(b)) => (Some(a), Some(b), true, None),
        (Err(e), _) | (_, Err(e)) if transverse_error(&e) => (None, None, false, Some(format!("t too small: {e}"))),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    Ok(complex
        .cubes_of_dim(complex.top_dim())
        .iter()
        .map(|&c| {
            let pv = p1.as_ref().map_or(0, |p| p.get(c));
            let v2 = p2.as_ref().map_or(0, |p| p.get(c));
            ComparisonRow {
                t,
                cube: c,
                product_value: pv,
                cup_value: cup1.get(c),
                equal: ok && pv == cup1.get(c),
                variant2_value: v2,
                variant2_expected: cup2.get(c),
                transversality_ok: ok,
                note: note.clone(),
            }
        })
        .collect())
}

/// Runs `main_theorem_check` over the grid and finds the least grid value
/// from which every later grid value gives full equality in both variants.
/// Also confirms cI(f_t W) = cI(W) and cI(f_t V) = cI(V) on the grid, and
/// spot-checks five further t values past the threshold.
pub fn threshold_sweep(complex: &CubicalComplex, w: &GeoCochain, v: &GeoCochain, cfg: &ProductConfig) -> Result<ComparisonReport, GeoError> {
    cfg.check()?;
    let (ciw, civ) = (intersect_cochain(complex, w)?, intersect_cochain(complex, v)?);
    let cup1 = cup(complex, &ciw, &civ);
    let koszul = if (w.codim() * v.codim()).is_multiple_of(2) { 1 } else { -1 };
    let cup2 = cup(complex, &civ, &ciw).scale(koszul);
    let per_t: Vec<Result<(Vec<ComparisonRow>, bool), GeoError>> = cfg
        .t_grid
        .par_iter()
        .map(|&t| {
            let rows = rows_at(complex, w, v, t, cfg, &cup1, &cup2)?;
            let inv = intersect_cochain(complex, &w.flowed(t))? == ciw
                && intersect_cochain(complex, &v.flowed(-t))? == civ
                && intersect_cochain(complex, &w.flowed(-t))? == ciw
                && intersect_cochain(complex, &v.flowed(t))? == civ;
            Ok((rows, inv))
        })
        .collect();
    let mut rows = Vec::new();
    let mut flow_invariant = true;
    let mut good = Vec::with_capacity(cfg.t_grid.len());
    for r in per_t {
        let (rs, inv) = r?;
        flow_invariant &= inv;
        good.push(rs.iter().all(ComparisonRow::full_match));
        rows.extend(rs);
    }
    let mut t_found = None;
    for k in (0..good.len()).rev() {
        if !good[k] {
            break;
        }
        t_found = Some(cfg.t_grid[k]);
    }
    let mut stability = Vec::new();
    if let Some(t0) = t_found {
        let last = *cfg.t_grid.last().expect("nonempty grid");
        let span = (last - t0).max(1.0);
        for k in 1..=5 {
            let t = t0 + span * (k as f64 - 0.5) / 5.0;
            let ok = rows_at(complex, w, v, t, cfg, &cup1, &cup2)?.iter().all(ComparisonRow::full_match);
            stability.push((t, ok));
        }
    }
    Ok(ComparisonReport { rows, t_found, flow_invariant, stability, cup: cup1, cup_variant2: cup2 })
}
