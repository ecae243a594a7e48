mod common;

use cubeflow::cochain::{cup, IntCochain};
use cubeflow::complex::build_torus_grid;
use cubeflow::cube::{enumerate_faces, is_reciprocal, shuffle_sign, FacePartition, Sign, VertexSet};
use cubeflow::geometry::{intersect_cochain, validate_transverse, GeoCochain};
use cubeflow::product::fixtures::{
    figure1, polyline_pieces, t3_experiment, torus_top, FIGURE1_DIMS, FIGURE1_L, FIGURE1_S, T3_DIMS,
};
use cubeflow::product::{
    face_pair_test, fiber_product_points, main_theorem_check, product_cochain, reciprocal_threshold,
    reciprocal_unit_test, threshold_sweep, ProductConfig,
};
use cubeflow::{CubicalComplex, GraphPiece};

use common::{vertical_cycle, TORUS};

fn grid() -> Vec<f64> {
    (0..=10).map(f64::from).collect()
}

#[test]
fn figure1_sweep() {
    let c = build_torus_grid(&FIGURE1_DIMS).unwrap();
    let (w, v) = figure1(&c).unwrap();
    assert!(validate_transverse(&c, &w).is_ok());
    assert!(validate_transverse(&c, &v).is_ok());
    let s = torus_top(&c, &FIGURE1_DIMS, &FIGURE1_S);
    let l = torus_top(&c, &FIGURE1_DIMS, &FIGURE1_L);
    let cu = cup(&c, &intersect_cochain(&c, &w).unwrap(), &intersect_cochain(&c, &v).unwrap());
    for &e in c.cubes_of_dim(2) {
        assert_eq!(cu.get(e), i64::from(e == s), "cube {e}");
    }

    let cfg = ProductConfig::default();
    let rows0 = main_theorem_check(&c, &w, &v, 0.0, &cfg).unwrap();
    let row_s = rows0.iter().find(|r| r.cube == s).unwrap();
    assert_eq!((row_s.product_value, row_s.cup_value), (0, 1));
    assert!(!row_s.equal);
    // at t = 0 the two cycles cross once, in the square to the left of S
    assert_eq!(rows0.iter().find(|r| r.cube == l).unwrap().product_value, 1);

    let rep = threshold_sweep(&c, &w, &v, &cfg).unwrap();
    let t = rep.t_found.expect("threshold on the grid");
    assert!(t > 0.0 && t <= 10.0);
    assert!(rep.is_stable(), "{:?}", rep.stability);
    assert!(rep.flow_invariant);
    for r in rep.rows.iter().filter(|r| r.t >= t) {
        assert!(r.full_match(), "{r:?}");
    }
    // variant (2): cI(f_{−t}W ×_M f_t V) = −cI(V) ⌣ cI(W)
    assert_eq!(rep.cup_variant2, cup(&c, &intersect_cochain(&c, &v).unwrap(), &intersect_cochain(&c, &w).unwrap()).scale(-1));
    assert!(!rep.cup_variant2.is_zero());
}

#[test]
fn figure1_point_at_t6() {
    let c = build_torus_grid(&FIGURE1_DIMS).unwrap();
    let (w, v) = figure1(&c).unwrap();
    let s = torus_top(&c, &FIGURE1_DIMS, &FIGURE1_S);
    let pts = fiber_product_points(&c, &w.flowed(6.0), &v.flowed(-6.0), s, &ProductConfig::default()).unwrap();
    assert_eq!(pts.len(), 1);
    let p = &pts.points[0];
    assert_eq!(p.sign, Sign::Pos);
    assert!(p.coords[0] > 0.9 && p.coords[1] < 0.1, "{:?}", p.coords);
    let pc = product_cochain(&c, &w, &v, 6.0, &ProductConfig::default()).unwrap();
    assert_eq!(pc, IntCochain::indicator(&c, s));
}

#[test]
fn three_torus_sweep() {
    let c = build_torus_grid(&T3_DIMS).unwrap();
    let (w, v) = t3_experiment(&c).unwrap();
    assert!(validate_transverse(&c, &w).is_ok());
    assert!(validate_transverse(&c, &v).is_ok());
    let rep = threshold_sweep(&c, &w, &v, &ProductConfig::default()).unwrap();
    let t = rep.t_found.expect("threshold on the grid");
    assert!(t > 0.0);
    assert!(rep.is_stable() && rep.flow_invariant);
    assert_eq!(rep.cup.support_len(), 1);
    assert!(rep.cup.iter().all(|(_, x)| x.abs() == 1));
    // |W||V| = 2: no sign between the variants
    assert_eq!(rep.cup_variant2, cup(&c, &intersect_cochain(&c, &v).unwrap(), &intersect_cochain(&c, &w).unwrap()));
}

#[test]
fn parallel_cycles_never_meet() {
    let c = build_torus_grid(&TORUS).unwrap();
    let w = vertical_cycle(&c, 0, 0.4, Sign::Pos);
    let v = vertical_cycle(&c, 0, 0.6, Sign::Pos);
    let cu = cup(&c, &intersect_cochain(&c, &w).unwrap(), &intersect_cochain(&c, &v).unwrap());
    assert!(cu.is_zero());
    for t in grid() {
        assert!(product_cochain(&c, &w, &v, t, &ProductConfig::default()).unwrap().is_zero());
    }
    let rep = threshold_sweep(&c, &w, &v, &ProductConfig::default()).unwrap();
    assert_eq!(rep.t_found, Some(0.0));
}

#[test]
fn empty_and_disjoint_inputs() {
    let c = build_torus_grid(&TORUS).unwrap();
    let (w, _) = figure1(&c).unwrap();
    let empty = GeoCochain::empty(&c, 1).unwrap();
    let rep = threshold_sweep(&c, &w, &empty, &ProductConfig::default()).unwrap();
    assert_eq!(rep.t_found, Some(0.0));
    assert!(rep.rows.iter().all(|r| r.product_value == 0 && r.cup_value == 0));

    let arc = |pos: [usize; 2]| {
        let sq = torus_top(&c, &TORUS, &pos);
        let p = GraphPiece::new(sq, 2, vec![0], vec![vec![0.3, 0.4], vec![0.7, 0.6]], vec![vec![0, 1]], Sign::Pos).unwrap();
        GeoCochain::new(&c, 1, vec![p]).unwrap()
    };
    let (a, b) = (arc([0, 0]), arc([2, 1]));
    for t in [0.0, 3.0, 10.0] {
        assert!(product_cochain(&c, &a, &b, t, &ProductConfig::default()).unwrap().is_zero());
    }
}

#[test]
fn crossing_cycles_agree_from_the_start() {
    // x₁ = 1.5 and x₂ = 1.5 already cross inside S, in the direction the
    // flows push them.
    let c = build_torus_grid(&TORUS).unwrap();
    let w = vertical_cycle(&c, 1, 0.5, Sign::Pos);
    let v_pts = vec![vec![0.0, 1.5], vec![3.0, 1.5]];
    let v = GeoCochain::new(&c, 1, polyline_pieces(&c, &TORUS, &v_pts, 0, Sign::Pos).unwrap()).unwrap();
    let rep = threshold_sweep(&c, &w, &v, &ProductConfig::default()).unwrap();
    assert_eq!(rep.t_found, Some(0.0));
    let s = torus_top(&c, &TORUS, &[1, 1]);
    assert_eq!(rep.cup.support_len(), 1);
    assert_eq!(rep.cup.get(s).abs(), 1);
}

#[test]
fn reciprocal_sign_law() {
    let cfg = ProductConfig::default();
    for n in 2..=3 {
        for v in VertexSet::all(n).unwrap() {
            let (minus, plus) = cubeflow::cube::vertex_decomposition(&v);
            let out = reciprocal_threshold(&minus, &plus, &grid(), &cfg).unwrap().expect("threshold on the grid");
            assert_eq!(out.points.len(), 1);
            assert_eq!(out.points.points[0].sign, shuffle_sign(&v.as_face()), "v = {:?}", v.ones());
        }
    }
    let t = 8.0;
    assert_eq!(reciprocal_unit_test(&VertexSet::new(2, &[1]).unwrap(), t, &cfg).unwrap().points[0].sign, Sign::Pos);
    assert_eq!(reciprocal_unit_test(&VertexSet::new(2, &[2]).unwrap(), t, &cfg).unwrap().points[0].sign, Sign::Neg);
    let bottom = FacePartition::new(2, &[2], &[1], &[]).unwrap();
    let top = FacePartition::new(2, &[], &[1], &[2]).unwrap();
    assert!(face_pair_test(&bottom, &top, t, &cfg).unwrap().is_empty());
}

#[test]
fn non_reciprocal_pairs_separate() {
    let cfg = ProductConfig::default();
    for n in 2..=3 {
        let faces = enumerate_faces(n, None).unwrap();
        let mut count = 0;
        for f in &faces {
            for g in &faces {
                if f.dim() + g.dim() == n && !is_reciprocal(f, g) {
                    let out = reciprocal_threshold(f, g, &grid(), &cfg).unwrap();
                    assert!(out.is_some_and(|o| o.points.is_empty()), "{f} {g}");
                    count += 1;
                }
            }
        }
        assert_eq!(count, if n == 2 { 20 } else { 152 });
    }
}

#[test]
fn swapping_factors_multiplies_signs() {
    let cfg = ProductConfig::default();
    let c = build_torus_grid(&FIGURE1_DIMS).unwrap();
    let (w, v) = figure1(&c).unwrap();
    let c3 = build_torus_grid(&T3_DIMS).unwrap();
    let (w3, v3) = t3_experiment(&c3).unwrap();
    for (cx, w, v, t) in [(&c, &w, &v, 6.0), (&c3, &w3, &v3, 6.0)] {
        let koszul = if (w.codim() * v.codim()) % 2 == 0 { Sign::Pos } else { Sign::Neg };
        let (wt, vt) = (w.flowed(t), v.flowed(-t));
        let mut seen = 0;
        for &e in cx.cubes_of_dim(cx.top_dim()) {
            let a = fiber_product_points(cx, &wt, &vt, e, &cfg).unwrap();
            let b = fiber_product_points(cx, &vt, &wt, e, &cfg).unwrap();
            assert_eq!(a.len(), b.len());
            for p in &a.points {
                let q = b.points.iter().find(|q| q.coords.iter().zip(&p.coords).all(|(x, y)| (x - y).abs() < 1e-9)).unwrap();
                assert_eq!(q.sign, p.sign * koszul);
                seen += 1;
            }
        }
        assert!(seen > 0);
    }
}

#[test]
fn locality_against_single_cube_recomputation() {
    let cfg = ProductConfig::default();
    let c = build_torus_grid(&FIGURE1_DIMS).unwrap();
    let (w, v) = figure1(&c).unwrap();
    let unit = CubicalComplex::standard_cube(2).unwrap();
    let top = unit.cubes_of_dim(2)[0];
    let restrict = |g: &GeoCochain, e| {
        let pieces: Vec<GraphPiece> = g
            .pieces()
            .iter()
            .filter(|p| p.cube() == e)
            .map(|p| GraphPiece::new(top, 2, p.base_axes().to_vec(), p.nodes().to_vec(), p.cells().to_vec(), p.normal_sign()).unwrap())
            .collect();
        GeoCochain::new(&unit, g.codim(), pieces).unwrap()
    };
    for t in [0.0, 2.0, 6.0, 10.0] {
        let global = product_cochain(&c, &w, &v, t, &cfg).unwrap();
        for &e in c.cubes_of_dim(2) {
            let local = product_cochain(&unit, &restrict(&w, e), &restrict(&v, e), t, &cfg).unwrap();
            assert_eq!(global.get(e), local.get(top), "t = {t}, cube {e}");
        }
    }
}
