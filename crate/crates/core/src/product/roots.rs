//! Intersections of two flowed piecewise-linear carriers inside one cube.
//!
//! The search runs over boxes in the target coordinates y. Since f_t acts
//! coordinatewise and monotonically, the preimage of a y-box under f_t is
//! again a box, so the test "does this cell of f_t(W) meet the box" is an
//! exact clip of a linear simplex against a box in the unflowed
//! coordinates. Boxes met by both carriers are bisected down to a leaf
//! width; leaves are polished with Newton's method on the cell parameters.

use super::ProductConfig;
use crate::error::GeoError;
use crate::flow::{flow_jacobian, flow_point, flow_scalar};
use crate::geometry::linalg::{solve, sub};
use crate::geometry::GraphPiece;

/// One simplex of a flowed carrier.
#[derive(Clone, Debug)]
pub(crate) struct FlowCell<'a> {
    pub piece: &'a GraphPiece,
    pub piece_index: usize,
    pub nodes: Vec<Vec<f64>>,
    pub t: f64,
}

impl<'a> FlowCell<'a> {
    pub fn new(piece: &'a GraphPiece, piece_index: usize, cell: usize, t: f64) -> Self {
        let nodes = piece.cells()[cell].iter().map(|&k| piece.nodes()[k].clone()).collect();
        Self { piece, piece_index, nodes, t }
    }

    pub fn dim(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn x_at(&self, mu: &[f64]) -> Vec<f64> {
        let mut x = self.nodes[0].clone();
        for (k, &w) in mu.iter().enumerate() {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += w * (self.nodes[k + 1][i] - self.nodes[0][i]);
            }
        }
        x
    }

    /// Unflowed edge vectors.
    pub fn edges(&self) -> Vec<Vec<f64>> {
        self.nodes[1..].iter().map(|p| sub(p, &self.nodes[0])).collect()
    }

    /// Tangent of the flowed carrier at the image of x.
    pub fn tangent_at(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let jac = flow_jacobian(x, self.t);
        self.edges().into_iter().map(|e| e.iter().zip(&jac).map(|(a, b)| a * b).collect()).collect()
    }

    /// Parameter polygon of the part of the cell inside the x-box.
    fn clip(&self, lo: &[f64], hi: &[f64]) -> Option<Vec<Vec<f64>>> {
        let m = self.dim();
        let mut poly: Vec<Vec<f64>> = vec![vec![0.0; m]];
        for k in 0..m {
            let mut e = vec![0.0; m];
            e[k] = 1.0;
            poly.push(e);
        }
        let slack = 1e-14;
        for i in 0..lo.len() {
            for upper in [false, true] {
                let g = |mu: &[f64]| {
                    let xi = self.x_at(mu)[i];
                    if upper {
                        hi[i] + slack - xi
                    } else {
                        xi - (lo[i] - slack)
                    }
                };
                poly = clip_polygon(&poly, g);
                if poly.is_empty() {
                    return None;
                }
            }
        }
        Some(poly)
    }

    /// Preimage of a y-box under this cell's flow.
    fn pull_box(&self, lo: &[f64], hi: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (
            lo.iter().map(|&y| flow_scalar(y, -self.t)).collect(),
            hi.iter().map(|&y| flow_scalar(y, -self.t)).collect(),
        )
    }
}

/// Sutherland–Hodgman against {g ≥ 0}; `g` is affine in the parameters.
fn clip_polygon(poly: &[Vec<f64>], g: impl Fn(&[f64]) -> f64) -> Vec<Vec<f64>> {
    let n = poly.len();
    if n == 1 {
        return if g(&poly[0]) >= 0.0 { poly.to_vec() } else { Vec::new() };
    }
    let mut out = Vec::new();
    for k in 0..n {
        let (p, q) = (&poly[k], &poly[(k + 1) % n]);
        let (gp, gq) = (g(p), g(q));
        if gp >= 0.0 {
            out.push(p.clone());
        }
        if (gp >= 0.0) != (gq >= 0.0) {
            let s = gp / (gp - gq);
            out.push(p.iter().zip(q).map(|(a, b)| a + s * (b - a)).collect());
        }
    }
    out
}

fn centroid(poly: &[Vec<f64>]) -> Vec<f64> {
    let m = poly[0].len();
    let mut c = vec![0.0; m];
    for p in poly {
        for (ci, x) in c.iter_mut().zip(p) {
            *ci += x / poly.len() as f64;
        }
    }
    c
}

/// A transverse-looking solution before signing.
#[derive(Clone, Debug)]
pub(crate) struct Root {
    pub y: Vec<f64>,
    pub xw: Vec<f64>,
    pub xv: Vec<f64>,
    pub w_cell: usize,
    pub v_cell: usize,
}

fn in_simplex(mu: &[f64], tol: f64) -> bool {
    mu.iter().all(|&x| x >= -tol) && mu.iter().sum::<f64>() <= 1.0 + tol
}

fn newton(w: &FlowCell, v: &FlowCell, lam0: &[f64], mu0: &[f64], cfg: &ProductConfig) -> Option<(Vec<f64>, Vec<f64>)> {
    let (mw, mv) = (w.dim(), v.dim());
    let (mut lam, mut mu) = (lam0.to_vec(), mu0.to_vec());
    let (ew, ev) = (w.edges(), v.edges());
    for _ in 0..cfg.newton_max_iter {
        let (xw, xv) = (w.x_at(&lam), v.x_at(&mu));
        let (yw, yv) = (flow_point(&xw, w.t), flow_point(&xv, v.t));
        let f: Vec<f64> = yw.iter().zip(&yv).map(|(a, b)| a - b).collect();
        let (jw, jv) = (flow_jacobian(&xw, w.t), flow_jacobian(&xv, v.t));
        // Rounding x to the nearest double moves y by up to J·ε, which for
        // preimages squeezed against a face can exceed the fixed tolerance.
        let converged = f
            .iter()
            .enumerate()
            .all(|(i, r)| r.abs() <= cfg.newton_tol + 8.0 * f64::EPSILON * (jw[i] + jv[i]));
        if converged {
            return Some((lam, mu));
        }
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(mw + mv);
        for e in &ew {
            cols.push(e.iter().zip(&jw).map(|(a, b)| a * b).collect());
        }
        for e in &ev {
            cols.push(e.iter().zip(&jv).map(|(a, b)| -a * b).collect());
        }
        let rhs: Vec<f64> = f.iter().map(|x| -x).collect();
        let step = solve(&cols, &rhs)?;
        if step.iter().any(|s| !s.is_finite()) {
            return None;
        }
        for k in 0..mw {
            lam[k] += step[k];
        }
        for k in 0..mv {
            mu[k] += step[mw + k];
        }
        if !in_simplex(&lam, 0.5) || !in_simplex(&mu, 0.5) {
            return None;
        }
    }
    None
}

/// All intersections of the flowed cells `ws` and `vs` in the unit cube.
pub(crate) fn find_roots(ws: &[FlowCell], vs: &[FlowCell], d: usize, cfg: &ProductConfig) -> Result<Vec<Root>, GeoError> {
    let mut roots = Vec::new();
    if ws.is_empty() || vs.is_empty() {
        return Ok(roots);
    }
    if vs.iter().all(|c| c.dim() == 0) || ws.iter().all(|c| c.dim() == 0) {
        return point_roots(ws, vs, cfg);
    }
    let mut leaves = 0usize;
    let mut stack: Vec<(Vec<f64>, Vec<f64>, Vec<usize>, Vec<usize>, usize)> =
        vec![(vec![0.0; d], vec![1.0; d], (0..ws.len()).collect(), (0..vs.len()).collect(), 0)];
    while let Some((lo, hi, wc, vc, depth)) = stack.pop() {
        let hit = |cells: &[FlowCell], cand: &[usize]| -> Vec<(usize, Vec<Vec<f64>>)> {
            cand.iter()
                .filter_map(|&i| {
                    let (xl, xh) = cells[i].pull_box(&lo, &hi);
                    cells[i].clip(&xl, &xh).map(|p| (i, p))
                })
                .collect()
        };
        let wh = hit(ws, &wc);
        if wh.is_empty() {
            continue;
        }
        let vh = hit(vs, &vc);
        if vh.is_empty() {
            continue;
        }
        let width = lo.iter().zip(&hi).fold(0.0f64, |acc, (a, b)| acc.max(b - a));
        if width <= cfg.leaf_width || depth >= cfg.depth_cap {
            leaves += 1;
            if leaves > cfg.max_leaves {
                return Err(GeoError::RootFinder(format!(
                    "more than {} leaf boxes; carriers are not transverse or nearly coincide",
                    cfg.max_leaves
                )));
            }
            for (i, pw) in &wh {
                for (j, pv) in &vh {
                    if let Some((lam, mu)) = newton(&ws[*i], &vs[*j], &centroid(pw), &centroid(pv), cfg) {
                        if in_simplex(&lam, 1e-9) && in_simplex(&mu, 1e-9) {
                            let xw = ws[*i].x_at(&lam);
                            let xv = vs[*j].x_at(&mu);
                            let y = flow_point(&xw, ws[*i].t);
                            roots.push(Root { y, xw, xv, w_cell: *i, v_cell: *j });
                        }
                    }
                }
            }
            continue;
        }
        let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let wc: Vec<usize> = wh.iter().map(|(i, _)| *i).collect();
        let vc: Vec<usize> = vh.iter().map(|(i, _)| *i).collect();
        for corner in 0u32..(1 << d) {
            let (mut l, mut h) = (lo.clone(), hi.clone());
            for a in 0..d {
                if corner & (1 << a) != 0 {
                    l[a] = mid[a];
                } else {
                    h[a] = mid[a];
                }
            }
            stack.push((l, h, wc.clone(), vc.clone(), depth + 1));
        }
    }
    Ok(roots)
}

/// One side is a finite point set: locate each flowed point in the other
/// side's flowed cells.
fn point_roots(ws: &[FlowCell], vs: &[FlowCell], _cfg: &ProductConfig) -> Result<Vec<Root>, GeoError> {
    let w_points = ws.iter().all(|c| c.dim() == 0);
    let (pts, region) = if w_points { (ws, vs) } else { (vs, ws) };
    let mut roots = Vec::new();
    for (pi, p) in pts.iter().enumerate() {
        let y = flow_point(&p.nodes[0], p.t);
        for (ri, r) in region.iter().enumerate() {
            let x = flow_point(&y, -r.t);
            let rhs = sub(&x, &r.nodes[0]);
            let cols = r.edges();
            if cols.len() != rhs.len() {
                continue;
            }
            if let Some(mu) = solve(&cols, &rhs) {
                if in_simplex(&mu, 1e-12) {
                    let (xw, xv, w_cell, v_cell) =
                        if w_points { (p.nodes[0].clone(), x, pi, ri) } else { (x, p.nodes[0].clone(), ri, pi) };
                    roots.push(Root { y: y.clone(), xw, xv, w_cell, v_cell });
                }
            }
        }
    }
    Ok(roots)
}
