//! Builders for cochains on torus grids: polylines and coordinate planes
//! given in global coordinates, the two-dimensional example with an
//! anti-diagonal and a horizontal cycle, clipped triangles, a three-dimensional analogue, and
//! random transverse polylines.

use crate::complex::{CubeId, CubicalComplex};
use crate::cube::{FacePartition, Sign};
use crate::error::GeoError;
use crate::geometry::{intersection_number, GeoCochain, GraphPiece};

fn rank(dims: &[usize], pos: &[usize]) -> usize {
    pos.iter().zip(dims).fold(0, |acc, (&x, &k)| acc * k + x)
}

/// The top cube of a torus grid whose initial vertex sits at `pos`.
pub fn torus_top(complex: &CubicalComplex, dims: &[usize], pos: &[usize]) -> CubeId {
    let r = rank(dims, pos);
    *complex
        .cubes_of_dim(dims.len())
        .iter()
        .find(|&&c| complex.cube(c).verts[0] == r)
        .expect("position inside the grid")
}

/// The cube with initial vertex `pos` spanned by the 0-based axes `free`.
pub fn torus_face(complex: &CubicalComplex, dims: &[usize], pos: &[usize], free: &[usize]) -> CubeId {
    let n = dims.len();
    let f01: u32 = free.iter().map(|&a| 1u32 << a).sum();
    let all = (1u32 << n) - 1;
    let face = FacePartition::from_masks(n, all & !f01, f01, 0).expect("valid face");
    complex.face_cube(torus_top(complex, dims, pos), &face)
}

fn wrap(dims: &[usize], cell: &[i64]) -> Vec<usize> {
    cell.iter().zip(dims).map(|(&c, &k)| c.rem_euclid(k as i64) as usize).collect()
}

/// Cuts a polyline given in global coordinates of the torus R^n / dims at
/// the grid hyperplanes, one graph piece over `base_axis` per maximal run
/// inside a top cube. Consecutive vertices may not coincide.
pub fn polyline_pieces(
    complex: &CubicalComplex,
    dims: &[usize],
    pts: &[Vec<f64>],
    base_axis: usize,
    sign: Sign,
) -> Result<Vec<GraphPiece>, GeoError> {
    let n = dims.len();
    let mut runs: Vec<(Vec<i64>, Vec<Vec<f64>>)> = Vec::new();
    for seg in pts.windows(2) {
        let (a, b) = (&seg[0], &seg[1]);
        let at = |s: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + s * (y - x)).collect() };
        let mut params = vec![0.0, 1.0];
        for i in 0..n {
            let (lo, hi) = (a[i].min(b[i]), a[i].max(b[i]));
            let mut k = lo.floor() + 1.0;
            while k < hi {
                params.push((k - a[i]) / (b[i] - a[i]));
                k += 1.0;
            }
        }
        params.sort_by(|x, y| x.partial_cmp(y).unwrap());
        params.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
        for w in params.windows(2) {
            let mid = at(0.5 * (w[0] + w[1]));
            let cell: Vec<i64> = mid.iter().map(|x| x.floor() as i64).collect();
            let local = |s: f64| -> Vec<f64> {
                at(s).iter().zip(&cell).map(|(x, c)| (x - *c as f64).clamp(0.0, 1.0)).collect()
            };
            let (p0, p1) = (local(w[0]), local(w[1]));
            match runs.last_mut() {
                Some((c, run)) if *c == cell => run.push(p1),
                _ => runs.push((cell, vec![p0, p1])),
            }
        }
    }
    runs.into_iter()
        .map(|(cell, nodes)| {
            let cube = torus_top(complex, dims, &wrap(dims, &cell));
            let cells = (0..nodes.len() - 1).map(|k| vec![k, k + 1]).collect();
            GraphPiece::new(cube, n, vec![base_axis], nodes, cells, sign)
        })
        .collect()
}

/// The hypersurface {x_axis = h} (h global, not an integer), one piece per
/// top cube of its slab.
pub fn plane_pieces(complex: &CubicalComplex, dims: &[usize], axis: usize, h: f64, sign: Sign) -> Result<Vec<GraphPiece>, GeoError> {
    let n = dims.len();
    let slab = h.floor();
    let hl = h - slab;
    let others: Vec<usize> = (0..n).filter(|&a| a != axis).collect();
    let k = others.len();
    let mut nodes = Vec::new();
    for s in 0u32..(1 << k) {
        let mut x = vec![0.0; n];
        x[axis] = hl;
        for (b, &a) in others.iter().enumerate() {
            x[a] = if s & (1 << b) != 0 { 1.0 } else { 0.0 };
        }
        nodes.push(x);
    }
    let cells: Vec<Vec<usize>> = match k {
        0 => vec![vec![0]],
        1 => vec![vec![0, 1]],
        2 => vec![vec![0, 1, 3], vec![0, 3, 2]],
        _ => return Err(GeoError::UnsupportedDimension(n)),
    };
    let mut out = Vec::new();
    let count: usize = others.iter().map(|&a| dims[a]).product();
    for r in 0..count {
        let mut pos = vec![0usize; n];
        pos[axis] = (slab as i64).rem_euclid(dims[axis] as i64) as usize;
        let mut rest = r;
        for &a in others.iter().rev() {
            pos[a] = rest % dims[a];
            rest /= dims[a];
        }
        let cube = torus_top(complex, dims, &pos);
        out.push(GraphPiece::new(cube, n, others.clone(), nodes.clone(), cells.clone(), sign)?);
    }
    Ok(out)
}

/// Clips a convex polygon (global coordinates) to {x_axis >= h} or
/// {x_axis <= h}. Cut points get x_axis = h exactly.
fn clip(poly: &[Vec<f64>], axis: usize, h: f64, keep_above: bool) -> Vec<Vec<f64>> {
    let inside = |x: &[f64]| if keep_above { x[axis] >= h } else { x[axis] <= h };
    let mut out = Vec::new();
    for k in 0..poly.len() {
        let (a, b) = (&poly[k], &poly[(k + 1) % poly.len()]);
        if inside(a) {
            out.push(a.clone());
        }
        if inside(a) != inside(b) && a[axis] != h && b[axis] != h {
            let s = (h - a[axis]) / (b[axis] - a[axis]);
            let mut x: Vec<f64> = a.iter().zip(b).map(|(u, v)| u + s * (v - u)).collect();
            x[axis] = h;
            out.push(x);
        }
    }
    out
}

/// Cuts a triangle given in global coordinates of a 3-dimensional torus grid
/// at the grid planes and fan-triangulates each cell polygon; every piece is
/// a graph over the two `base_axes`.
pub fn triangle_pieces(
    complex: &CubicalComplex,
    dims: &[usize],
    tri: &[Vec<f64>],
    base_axes: [usize; 2],
    sign: Sign,
) -> Result<Vec<GraphPiece>, GeoError> {
    let n = dims.len();
    if n != 3 || tri.len() != 3 {
        return Err(GeoError::Schema("triangle_pieces needs a triangle in a 3-dimensional grid".into()));
    }
    let lo: Vec<i64> = (0..n).map(|i| tri.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min).floor() as i64).collect();
    let hi: Vec<i64> = (0..n).map(|i| tri.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max).floor() as i64).collect();
    let mut out = Vec::new();
    for c0 in lo[0]..=hi[0] {
        for c1 in lo[1]..=hi[1] {
            for c2 in lo[2]..=hi[2] {
                let cell = [c0, c1, c2];
                let mut poly = tri.to_vec();
                for (i, &c) in cell.iter().enumerate() {
                    poly = clip(&poly, i, c as f64, true);
                    poly = clip(&poly, i, c as f64 + 1.0, false);
                }
                poly.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() < 1e-12));
                while poly.len() > 1 && poly[0].iter().zip(&poly[poly.len() - 1]).all(|(x, y)| (x - y).abs() < 1e-12) {
                    poly.pop();
                }
                if poly.len() < 3 {
                    continue;
                }
                let nodes: Vec<Vec<f64>> = poly
                    .iter()
                    .map(|x| x.iter().zip(&cell).map(|(v, &c)| (v - c as f64).clamp(0.0, 1.0)).collect())
                    .collect();
                let cells = (1..nodes.len() - 1).map(|k| vec![0, k, k + 1]).collect();
                let cube = torus_top(complex, dims, &wrap(dims, &cell));
                out.push(GraphPiece::new(cube, n, base_axes.to_vec(), nodes, cells, sign)?);
            }
        }
    }
    Ok(out)
}

/// Builds the cochain and flips its co-orientation if needed so that its
/// intersection number with `target` is +1.
pub fn cooriented(complex: &CubicalComplex, codim: usize, pieces: Vec<GraphPiece>, target: CubeId) -> Result<GeoCochain, GeoError> {
    let w = GeoCochain::new(complex, codim, pieces)?;
    match intersection_number(complex, &w, target)?.1 {
        1 => Ok(w),
        -1 => Ok(w.reversed()),
        k => Err(GeoError::Schema(format!("cochain meets cube {target} with multiplicity {k}"))),
    }
}

pub const FIGURE1_DIMS: [usize; 2] = [3, 3];
/// The distinguished square S, and the square L to its left.
pub const FIGURE1_S: [usize; 2] = [1, 1];
pub const FIGURE1_L: [usize; 2] = [0, 1];

/// On the 3×3 torus: W is the anti-diagonal cycle x₁ + x₂ = 2.3, which in
/// S is the polyline (0.3,0) → (0.15,0.15) → (0,0.3); V is the horizontal
/// cycle x₂ = 1.6, which in S is the segment (0,0.6) → (1,0.6). W is
/// co-oriented so that cI(W) is +1 on the bottom edge of S, and V so that
/// cI(V) is +1 on the right edge of S. At t = 0 the carriers meet in L.
pub fn figure1(complex: &CubicalComplex) -> Result<(GeoCochain, GeoCochain), GeoError> {
    let dims = FIGURE1_DIMS;
    let w_pts = vec![vec![0.0, 2.3], vec![1.15, 1.15], vec![3.0, -0.7]];
    let w_pieces = polyline_pieces(complex, &dims, &w_pts, 0, Sign::Pos)?;
    let bottom_s = torus_face(complex, &dims, &FIGURE1_S, &[0]);
    let w = cooriented(complex, 1, w_pieces, bottom_s)?;
    let v_pts = vec![vec![0.0, 1.6], vec![3.0, 1.6]];
    let v_pieces = polyline_pieces(complex, &dims, &v_pts, 0, Sign::Pos)?;
    let right_s = torus_face(complex, &dims, &[2, 1], &[1]);
    let v = cooriented(complex, 1, v_pieces, right_s)?;
    Ok((w, v))
}

pub const T3_DIMS: [usize; 3] = [3, 3, 3];

/// On the 3×3×3 torus: W is the surface x₁ = 0.3, co-oriented so that cI(W)
/// is +1 on the e₁-edge at the origin; V is the closed curve
/// s ↦ (s, 0.5 + s, 0.2 + s), co-oriented so that cI(V) is +1 on the square
/// x₁ = 1 it crosses at s = 1. At t = 0 they meet in the cube at the origin,
/// while the cup product lives on the cube at (0,1,1).
pub fn t3_experiment(complex: &CubicalComplex) -> Result<(GeoCochain, GeoCochain), GeoError> {
    let dims = T3_DIMS;
    let w_pieces = plane_pieces(complex, &dims, 0, 0.3, Sign::Pos)?;
    let edge = torus_face(complex, &dims, &[0, 0, 0], &[0]);
    let w = cooriented(complex, 1, w_pieces, edge)?;
    let v_pts = vec![vec![0.0, 0.5, 0.2], vec![3.0, 3.5, 3.2]];
    let v_pieces = polyline_pieces(complex, &dims, &v_pts, 0, Sign::Pos)?;
    let square = torus_face(complex, &dims, &[1, 1, 1], &[1, 2]);
    let v = cooriented(complex, 2, v_pieces, square)?;
    Ok((w, v))
}

/// Distance from x to the nearest integer.
fn frac_dist(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// A random polyline on a 2-dimensional torus grid, graph over the first
/// axis, kept at least `margin` away from grid vertices and with every
/// breakpoint off the grid lines. Open arcs have both ends inside squares;
/// closed ones wind once around the first axis. `uniform` yields values in
/// [0, 1).
pub fn random_polyline(dims: &[usize], closed: bool, margin: f64, uniform: &mut dyn FnMut() -> f64) -> Vec<Vec<f64>> {
    let (k1, k2) = (dims[0] as f64, dims[1] as f64);
    loop {
        let start = uniform() * k1;
        let len = if closed { k1 } else { 0.3 + uniform() * (k1 - 0.4) };
        let breaks = 1 + (uniform() * 4.0) as usize;
        let mut xs: Vec<f64> = (0..breaks).map(|_| start + uniform() * len).collect();
        xs.push(start);
        xs.push(start + len);
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let y0 = uniform() * k2;
        let mut pts: Vec<Vec<f64>> = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| vec![x, if i == 0 { y0 } else { uniform() * k2 }])
            .collect();
        if closed {
            let wind = (uniform() * 3.0) as i64 - 1;
            let last = pts.len() - 1;
            pts[last][1] = y0 + (wind as f64) * k2;
        }
        if pts.windows(2).any(|w| w[1][0] - w[0][0] < 1e-3) {
            continue;
        }
        let mut ok = pts.iter().all(|p| p.iter().all(|&c| frac_dist(c) > margin));
        for w in pts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            for i in 0..2 {
                let (lo, hi) = (a[i].min(b[i]), a[i].max(b[i]));
                let mut g = lo.floor() + 1.0;
                while g < hi {
                    let s = (g - a[i]) / (b[i] - a[i]);
                    let other = a[1 - i] + s * (b[1 - i] - a[1 - i]);
                    ok &= frac_dist(other) > margin;
                    g += 1.0;
                }
            }
        }
        if ok {
            return pts;
        }
    }
}
