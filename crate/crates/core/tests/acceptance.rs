//! Acceptance suite: one PASS/FAIL line per criterion, each with its own
//! time budget. Exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use cubeflow::cochain::{
    boundary, coboundary, cohomology, cohomology_generators, cup, evaluate, fundamental_chain, serre_diagonal, IntChain,
    IntCochain,
};
use cubeflow::complex::build_torus_grid;
use cubeflow::cube::{enumerate_faces, is_reciprocal, shuffle_sign, vertex_decomposition, FacePartition, VertexSet};
use cubeflow::flow::{
    domain_flow_probe, flow_cochain, flow_inverse, flow_jacobian, flow_limits, flow_point, flow_scalar,
    jacobian_ratio_probe, jacobian_ratio_probe_backward, region_flow_threshold, ProbeConfig, RegionKind, RegionSpec,
};
use cubeflow::geometry::{chain_map_check, intersect_cochain, validate_transverse, GeoCochain};
use cubeflow::product::fixtures::{figure1, t3_experiment, torus_top, FIGURE1_DIMS, FIGURE1_S, T3_DIMS};
use cubeflow::product::{main_theorem_check, reciprocal_threshold, threshold_sweep, ProductConfig};
use cubeflow::CubicalComplex;

use common::{koszul_term, random_chain, random_cochain, random_polyline_cochain, rk4, rng, shuffle_oracle, TORUS};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn combinatorial_exactness() -> Outcome {
    let mut exhaustive = 0usize;
    for n in 0..=6 {
        let c = CubicalComplex::standard_cube(n).map_err(|e| e.to_string())?;
        for e in 0..c.num_cubes() {
            let x = IntChain::indicator(&c, e);
            ensure!(boundary(&c, &boundary(&c, &x)).is_zero(), "∂² ≠ 0 on cube {e} of I^{n}");
            let a = IntCochain::indicator(&c, e);
            ensure!(coboundary(&c, &coboundary(&c, &a)).is_zero(), "δ² ≠ 0 on cube {e} of I^{n}");
            let d = c.dim(e);
            let mut got: Vec<_> = serre_diagonal(&c, e).iter().map(|t| (t.left, t.right, t.sign.to_i64())).collect();
            let mut want: Vec<_> = (0u32..(1 << d))
                .map(|m| {
                    let (l, r, s) = koszul_term(d, m);
                    (c.face_cube(e, &l), c.face_cube(e, &r), s)
                })
                .collect();
            got.sort();
            want.sort();
            ensure!(got == want, "diagonal of cube {e} of I^{n} differs from the Koszul expansion");
            exhaustive += 1;
        }
    }
    // all triples of basis cochains on I² and I³
    for n in 2..=3 {
        let c = CubicalComplex::standard_cube(n).map_err(|e| e.to_string())?;
        let ind: Vec<IntCochain> = (0..c.num_cubes()).map(|e| IntCochain::indicator(&c, e)).collect();
        for a in &ind {
            for b in &ind {
                let (p, q) = (a.degree(), b.degree());
                if p + q > n {
                    continue;
                }
                if p + q < n {
                    let sign = if p % 2 == 0 { 1 } else { -1 };
                    let rhs = cup(&c, &coboundary(&c, a), b).add(&cup(&c, a, &coboundary(&c, b)).scale(sign));
                    ensure!(coboundary(&c, &cup(&c, a, b)) == rhs, "Leibniz fails on I^{n}");
                }
                for g in &ind {
                    if p + q + g.degree() <= n {
                        ensure!(cup(&c, &cup(&c, a, b), g) == cup(&c, a, &cup(&c, b, g)), "associativity fails on I^{n}");
                        exhaustive += 1;
                    }
                }
            }
        }
    }
    let mut r = rng(101);
    let mut random = 0usize;
    for dims in [vec![3, 3], vec![3, 4], vec![3, 3, 3], vec![4], vec![3, 3, 3, 3]] {
        let c = build_torus_grid(&dims).map_err(|e| e.to_string())?;
        let top = c.top_dim();
        for _ in 0..250 {
            if top >= 2 {
                let d = r.gen_range(2..=top);
                ensure!(boundary(&c, &boundary(&c, &random_chain(&c, d, 0.3, &mut r))).is_zero(), "∂² ≠ 0 on {dims:?}");
                ensure!(coboundary(&c, &coboundary(&c, &random_cochain(&c, d - 2, 0.3, &mut r))).is_zero(), "δ² ≠ 0 on {dims:?}");
            }
            let p = r.gen_range(0..=top);
            let q = r.gen_range(0..=top - p);
            let s = r.gen_range(0..=top - p - q);
            let a = random_cochain(&c, p, 0.4, &mut r);
            let b = random_cochain(&c, q, 0.4, &mut r);
            let g = random_cochain(&c, s, 0.4, &mut r);
            ensure!(cup(&c, &cup(&c, &a, &b), &g) == cup(&c, &a, &cup(&c, &b, &g)), "associativity fails on {dims:?}");
            if p + q < top {
                let sign = if p % 2 == 0 { 1 } else { -1 };
                let rhs = cup(&c, &coboundary(&c, &a), &b).add(&cup(&c, &a, &coboundary(&c, &b)).scale(sign));
                ensure!(coboundary(&c, &cup(&c, &a, &b)) == rhs, "Leibniz fails on {dims:?}");
            }
            random += 1;
        }
    }
    ensure!(random >= 1000, "only {random} randomized cases");
    Ok(format!("{exhaustive} exhaustive checks, {random} randomized cases"))
}

fn shuffle_signs() -> Outcome {
    let mut count = 0;
    for n in 0..=8 {
        for f in enumerate_faces(n, None).map_err(|e| e.to_string())? {
            ensure!(shuffle_sign(&f) == shuffle_oracle(&f), "sh({f}) disagrees with the inversion count");
            count += 1;
        }
    }
    Ok(format!("{count} faces"))
}

fn torus_invariants() -> Outcome {
    let t = build_torus_grid(&[3, 3]).map_err(|e| e.to_string())?;
    let h = cohomology(&t);
    let betti: Vec<usize> = h.iter().map(|g| g.betti).collect();
    ensure!(betti == vec![1, 2, 1], "betti numbers {betti:?}");
    ensure!(h.iter().all(|g| g.torsion.is_empty()), "torsion present");
    let gens = cohomology_generators(&t, 1);
    let fc = fundamental_chain(&t);
    let m: Vec<Vec<i64>> = gens.iter().map(|a| gens.iter().map(|b| evaluate(&cup(&t, a, b), &fc)).collect()).collect();
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    ensure!(det.abs() == 1, "cup pairing determinant {det}");
    Ok(format!("H = Z, Z^2, Z; pairing {m:?}, det {det}"))
}

fn flow_numerics() -> Outcome {
    let xs: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let mut rk: f64 = 0.0;
    for &x in &xs {
        for t in -10..=10 {
            let t = t as f64;
            rk = rk.max((flow_scalar(x, t) - rk4(x, t, (4000.0 * t.abs()).max(1.0) as usize)).abs());
        }
    }
    ensure!(rk <= 1e-9, "RK4 deviation {rk:e}");
    let mut jac: f64 = 0.0;
    for k in 1..20 {
        let x = k as f64 / 20.0;
        for t in -10..=10 {
            let t = t as f64;
            let h = 1e-3 * x.min(1.0 - x);
            let f = |d: f64| flow_scalar(x + d * h, t);
            let fd = (-f(2.0) + 8.0 * f(1.0) - 8.0 * f(-1.0) + f(-2.0)) / (12.0 * h);
            let j = flow_jacobian(&[x], t)[0];
            jac = jac.max((fd - j).abs() / j.abs());
        }
    }
    ensure!(jac <= 1e-6, "Jacobian relative error {jac:e}");
    let ts = [-7.5, -2.0, -0.3, 0.0, 0.4, 1.0, 3.3, 8.0];
    let mut group: f64 = 0.0;
    for &x in &xs {
        for &s in &ts {
            let fs = flow_scalar(x, s);
            group = group.max((flow_inverse(&[fs], s)[0] - x).abs());
            for &t in &ts {
                group = group.max((flow_scalar(fs, t) - flow_scalar(x, s + t)).abs());
            }
        }
    }
    ensure!(group <= 1e-12, "group/inverse law error {group:e}");
    let mut lim: f64 = 0.0;
    for a in 0..=100 {
        for b in [0.0, 0.37, 1.0] {
            let x = [a as f64 / 100.0, b];
            let (lo, hi) = flow_limits(&x);
            let (yp, ym) = (flow_point(&x, 40.0), flow_point(&x, -40.0));
            for i in 0..2 {
                lim = lim.max((yp[i] - hi[i]).abs()).max((ym[i] - lo[i]).abs());
            }
        }
    }
    ensure!(lim <= 1e-12, "limit error {lim:e}");
    Ok(format!("RK4 {rk:.1e}, Jacobian {jac:.1e}, group {group:.1e}, limits {lim:.1e}"))
}

fn neighborhood_lemmas() -> Outcome {
    let cfg = ProbeConfig::default();
    let faces: Vec<FacePartition> = (1..=3).flat_map(|k| enumerate_faces(k, None).unwrap()).collect();
    let mut eps = cfg.eps.clone();
    eps.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut regions = 0;
    for f in &faces {
        for &u in &cfg.u {
            for &r in &cfg.r {
                for kind in [RegionKind::Upper, RegionKind::Lower] {
                    let region = RegionSpec { face: *f, kind, u, eps: r };
                    let mut prev: Option<f64> = None;
                    for &e in &eps {
                        let t = region_flow_threshold(&region, e, cfg.samples_per_axis, cfg.t_max, cfg.t_resolution)
                            .ok_or_else(|| format!("no threshold for {f}, u={u}, r={r}, eps={e}"))?;
                        if let Some(p) = prev {
                            ensure!(t + cfg.t_resolution >= p, "threshold for {f} not monotone in eps");
                        }
                        prev = Some(t);
                    }
                    regions += 1;
                }
            }
        }
    }
    let mut worst_t: f64 = 0.0;
    for f in &faces {
        for &e in &cfg.ratio_eps {
            let t = (0..=cfg.t_max as usize)
                .map(|t| t as f64)
                .find(|&t| {
                    jacobian_ratio_probe(f, cfg.ratio_u, cfg.ratio_delta, t, cfg.samples_per_axis) < e
                        && jacobian_ratio_probe_backward(f, cfg.ratio_u, cfg.ratio_delta, t, cfg.samples_per_axis) < e
                })
                .ok_or_else(|| format!("Jacobian ratio stays above {e} for {f}"))?;
            worst_t = worst_t.max(t);
        }
    }
    let mut domains = 0;
    for n in 1..=3 {
        for v in VertexSet::all(n).unwrap() {
            for &u in &cfg.u {
                for t in [0.0, 0.5, 3.0, 12.0, 40.0] {
                    ensure!(domain_flow_probe(&v, u, u, t, cfg.samples_per_axis, false), "domain containment fails for {v:?}");
                    ensure!(domain_flow_probe(&v, 1.0 - u, 1.0 - u, t, cfg.samples_per_axis, true), "domain containment fails for {v:?}");
                    domains += 1;
                }
            }
        }
    }
    Ok(format!("{regions} regions, ratio below every eps by t = {worst_t}, {domains} domain probes"))
}

fn intersection_homomorphism() -> Outcome {
    let t = build_torus_grid(&TORUS).map_err(|e| e.to_string())?;
    let mut r = rng(106);
    let (mut checked, mut nontrivial) = (0, 0);
    while checked < 120 {
        let w = random_polyline_cochain(&t, &mut r);
        if !validate_transverse(&t, &w).is_ok() {
            continue;
        }
        let rep = chain_map_check(&t, &w).map_err(|e| e.to_string())?;
        ensure!(rep.holds(), "chain map identity fails:\n{rep}");
        let ci = intersect_cochain(&t, &w).map_err(|e| e.to_string())?;
        ensure!(intersect_cochain(&t, &w.reversed()).map_err(|e| e.to_string())? == ci.scale(-1), "reversal does not negate cI");
        let other = random_polyline_cochain(&t, &mut r);
        if let Ok(u) = w.disjoint_union(&t, &other) {
            let co = intersect_cochain(&t, &other).map_err(|e| e.to_string())?;
            ensure!(intersect_cochain(&t, &u).map_err(|e| e.to_string())? == ci.add(&co), "cI is not additive");
        }
        if !rep.lhs.is_zero() {
            nontrivial += 1;
        }
        checked += 1;
    }
    Ok(format!("{checked} random polyline cochains ({nontrivial} with nonzero coboundary)"))
}

fn reciprocal_sign_law() -> Outcome {
    let cfg = ProductConfig::default();
    let grid: Vec<f64> = (0..=10).map(f64::from).collect();
    let (mut vertices, mut pairs, mut worst) = (0, 0, 0.0f64);
    for n in 2..=3 {
        for v in VertexSet::all(n).unwrap() {
            let (minus, plus) = vertex_decomposition(&v);
            let out = reciprocal_threshold(&minus, &plus, &grid, &cfg)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("no threshold for vertex {:?} of I^{n}", v.ones()))?;
            ensure!(out.points.len() == 1, "vertex {:?}: {} points", v.ones(), out.points.len());
            ensure!(out.points.points[0].sign == shuffle_sign(&v.as_face()), "vertex {:?}: wrong sign", v.ones());
            worst = worst.max(out.t);
            vertices += 1;
        }
        let faces = enumerate_faces(n, None).unwrap();
        for f in &faces {
            for g in &faces {
                if f.dim() + g.dim() == n && !is_reciprocal(f, g) {
                    let out = reciprocal_threshold(f, g, &grid, &cfg)
                        .map_err(|e| e.to_string())?
                        .ok_or_else(|| format!("pair {f} {g} never separates"))?;
                    ensure!(out.points.is_empty(), "pair {f} {g} meets");
                    worst = worst.max(out.t);
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{vertices} vertices give sh(v), {pairs} non-reciprocal pairs empty, all from t = {worst}"))
}

fn main_theorem() -> Outcome {
    let cfg = ProductConfig::default();
    let start2 = Instant::now();
    let c = build_torus_grid(&FIGURE1_DIMS).map_err(|e| e.to_string())?;
    let (w, v) = figure1(&c).map_err(|e| e.to_string())?;
    let s = torus_top(&c, &FIGURE1_DIMS, &FIGURE1_S);
    let rows0 = main_theorem_check(&c, &w, &v, 0.0, &cfg).map_err(|e| e.to_string())?;
    let r0 = rows0.iter().find(|r| r.cube == s).expect("row for S");
    ensure!(!r0.equal, "no mismatch on S at t = 0");
    let rep = threshold_sweep(&c, &w, &v, &cfg).map_err(|e| e.to_string())?;
    let t2 = rep.t_found.ok_or("no threshold for the two-torus example")?;
    ensure!(rep.is_stable(), "two-torus equality not stable: {:?}", rep.stability);
    let civ_ciw = cup(&c, &intersect_cochain(&c, &v).unwrap(), &intersect_cochain(&c, &w).unwrap());
    ensure!(rep.cup_variant2 == civ_ciw.scale(-1) && !civ_ciw.is_zero(), "variant (2) sign is not -1");
    let secs2 = start2.elapsed().as_secs_f64();
    ensure!(secs2 < 120.0, "two-torus sweep took {secs2:.1} s");

    let start = Instant::now();
    let c3 = build_torus_grid(&T3_DIMS).map_err(|e| e.to_string())?;
    let (w3, v3) = t3_experiment(&c3).map_err(|e| e.to_string())?;
    let rep3 = threshold_sweep(&c3, &w3, &v3, &cfg).map_err(|e| e.to_string())?;
    let t3 = rep3.t_found.ok_or("no threshold for the three-torus example")?;
    ensure!(rep3.is_stable(), "three-torus equality not stable");
    ensure!(!rep3.cup.is_zero(), "three-torus cup product vanishes");
    ensure!(start.elapsed() < Duration::from_secs(600), "three-torus sweep over 10 min");
    Ok(format!(
        "T^2: mismatch {} vs {} at t = 0, T = {t2}, variant (2) sign -1, {secs2:.2} s; T^3: T = {t3}, {:.2} s",
        r0.product_value,
        r0.cup_value,
        start.elapsed().as_secs_f64()
    ))
}

fn flow_invariance() -> Outcome {
    let c = build_torus_grid(&FIGURE1_DIMS).map_err(|e| e.to_string())?;
    let c3 = build_torus_grid(&T3_DIMS).map_err(|e| e.to_string())?;
    let (w, v) = figure1(&c).map_err(|e| e.to_string())?;
    let (w3, v3) = t3_experiment(&c3).map_err(|e| e.to_string())?;
    let mut inputs: Vec<(&CubicalComplex, GeoCochain)> = vec![(&c, w), (&c, v), (&c3, w3), (&c3, v3)];
    let mut r = rng(109);
    for _ in 0..10 {
        inputs.push((&c, random_polyline_cochain(&c, &mut r)));
    }
    let mut checks = 0;
    for (cx, g) in &inputs {
        let base = intersect_cochain(cx, g).map_err(|e| e.to_string())?;
        for t in -10..=10 {
            let flowed = flow_cochain(g, t as f64);
            ensure!(intersect_cochain(cx, &flowed).map_err(|e| e.to_string())? == base, "cI changes under the flow at t = {t}");
            checks += 1;
        }
    }
    Ok(format!("{} cochains × 21 times, {checks} exact comparisons", inputs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("combinatorial exactness", 30, combinatorial_exactness),
        ("shuffle signs", 5, shuffle_signs),
        ("torus invariants", 10, torus_invariants),
        ("flow numerics", 10, flow_numerics),
        ("neighborhood lemmas", 30, neighborhood_lemmas),
        ("intersection homomorphism", 60, intersection_homomorphism),
        ("reciprocal sign law", 60, reciprocal_sign_law),
        ("main theorem at desk scale", 720, main_theorem),
        ("flow invariance of cI", 30, flow_invariance),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let verdict = match outcome {
            Ok(detail) if secs < *limit as f64 => format!("PASS  {detail}"),
            Ok(detail) => format!("FAIL  over time budget; {detail}"),
            Err(why) => format!("FAIL  {why}"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {}: {name}: {verdict} [{secs:.2} s / {limit} s]", k + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
