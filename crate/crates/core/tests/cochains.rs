mod common;

use cubeflow::cochain::{
    boundary, coboundary, cohomology, cohomology_generators, cup, evaluate, fundamental_chain, serre_diagonal, IntChain,
    IntCochain,
};
use cubeflow::complex::build_torus_grid;
use cubeflow::cube::FacePartition;
use cubeflow::CubicalComplex;
use proptest::prelude::*;
use rand::Rng;

use common::{koszul_term, random_chain, random_cochain, rng};

fn grids() -> Vec<CubicalComplex> {
    [vec![3, 3], vec![3, 4], vec![3, 3, 3], vec![4], vec![3, 3, 3, 3]]
        .iter()
        .map(|d| build_torus_grid(d).unwrap())
        .collect()
}

#[test]
fn diagonal_matches_koszul_expansion() {
    for n in 0..=6 {
        let c = CubicalComplex::standard_cube(n).unwrap();
        for e in 0..c.num_cubes() {
            let d = c.dim(e);
            let mut got: Vec<(usize, usize, i64)> =
                serre_diagonal(&c, e).iter().map(|t| (t.left, t.right, t.sign.to_i64())).collect();
            let mut want: Vec<(usize, usize, i64)> = (0u32..(1 << d))
                .map(|m| {
                    let (l, r, s) = koszul_term(d, m);
                    (c.face_cube(e, &l), c.face_cube(e, &r), s)
                })
                .collect();
            got.sort();
            want.sort();
            assert_eq!(got, want, "cube {e} of dimension {d}");
        }
    }
}

#[test]
fn square_diagonal_and_cup_examples() {
    let c = CubicalComplex::standard_cube(2).unwrap();
    let sq = c.cubes_of_dim(2)[0];
    let f = |a: &[usize], b: &[usize], o: &[usize]| c.face_cube(sq, &FacePartition::new(2, a, b, o).unwrap());
    let (bottom, right, left, top) = (f(&[2], &[1], &[]), f(&[], &[2], &[1]), f(&[1], &[2], &[]), f(&[], &[1], &[2]));
    let terms: Vec<_> = serre_diagonal(&c, sq).iter().map(|t| (t.left, t.right, t.sign.to_i64())).collect();
    assert!(terms.contains(&(bottom, right, 1)));
    assert!(terms.contains(&(left, top, -1)));
    let ind = |e| IntCochain::indicator(&c, e);
    assert_eq!(cup(&c, &ind(bottom), &ind(right)).get(sq), 1);
    assert_eq!(cup(&c, &ind(left), &ind(top)).get(sq), -1);
    assert!(cup(&c, &ind(bottom), &IntCochain::zero(1)).is_zero());
}

#[test]
fn boundary_squares_to_zero_on_grids() {
    let mut r = rng(1);
    let mut cases = 0;
    for c in grids() {
        for _ in 0..60 {
            for d in 2..=c.top_dim() {
                let x = random_chain(&c, d, 0.3, &mut r);
                assert!(boundary(&c, &boundary(&c, &x)).is_zero());
                let a = random_cochain(&c, d - 2, 0.3, &mut r);
                assert!(coboundary(&c, &coboundary(&c, &a)).is_zero());
                cases += 1;
            }
        }
    }
    assert!(cases >= 300);
    for n in 0..=6 {
        let c = CubicalComplex::standard_cube(n).unwrap();
        for e in 0..c.num_cubes() {
            let x = IntChain::indicator(&c, e);
            assert!(boundary(&c, &boundary(&c, &x)).is_zero());
        }
    }
}

#[test]
fn coboundary_is_transpose() {
    let mut r = rng(2);
    for c in grids() {
        for _ in 0..50 {
            let d = r.gen_range(0..c.top_dim());
            let a = random_cochain(&c, d, 0.4, &mut r);
            let x = random_chain(&c, d + 1, 0.4, &mut r);
            assert_eq!(evaluate(&coboundary(&c, &a), &x), evaluate(&a, &boundary(&c, &x)));
        }
    }
}

#[test]
fn cup_associative_and_leibniz() {
    let mut r = rng(3);
    let mut cases = 0;
    for c in grids() {
        let top = c.top_dim();
        for _ in 0..120 {
            let p = r.gen_range(0..=top);
            let q = r.gen_range(0..=top - p);
            let s = r.gen_range(0..=top - p - q);
            let a = random_cochain(&c, p, 0.5, &mut r);
            let b = random_cochain(&c, q, 0.5, &mut r);
            let g = random_cochain(&c, s, 0.5, &mut r);
            assert_eq!(cup(&c, &cup(&c, &a, &b), &g), cup(&c, &a, &cup(&c, &b, &g)));
            if p + q < top {
                let lhs = coboundary(&c, &cup(&c, &a, &b));
                let sign = if p % 2 == 0 { 1 } else { -1 };
                let rhs = cup(&c, &coboundary(&c, &a), &b).add(&cup(&c, &a, &coboundary(&c, &b)).scale(sign));
                assert_eq!(lhs, rhs);
            }
            cases += 1;
        }
    }
    assert!(cases >= 600);
}

#[test]
fn fundamental_chain_is_a_cycle() {
    let t = build_torus_grid(&[3, 3]).unwrap();
    assert!(boundary(&t, &fundamental_chain(&t)).is_zero());
}

#[test]
fn torus_cohomology_and_cup_pairing() {
    let t = build_torus_grid(&[3, 3]).unwrap();
    let h = cohomology(&t);
    let betti: Vec<usize> = h.iter().map(|g| g.betti).collect();
    assert_eq!(betti, vec![1, 2, 1]);
    assert!(h.iter().all(|g| g.torsion.is_empty()));
    let gens = cohomology_generators(&t, 1);
    assert_eq!(gens.len(), 2);
    let fc = fundamental_chain(&t);
    let m: Vec<Vec<i64>> =
        gens.iter().map(|a| gens.iter().map(|b| evaluate(&cup(&t, a, b), &fc)).collect()).collect();
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            assert_eq!(x, -m[j][i]);
        }
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    assert_eq!(det.abs(), 1);

    let circle = build_torus_grid(&[3]).unwrap();
    let betti: Vec<usize> = cohomology(&circle).iter().map(|g| g.betti).collect();
    assert_eq!(betti, vec![1, 1]);
    for n in 1..=3 {
        let c = CubicalComplex::standard_cube(n).unwrap();
        let betti: Vec<usize> = cohomology(&c).iter().map(|g| g.betti).collect();
        let mut want = vec![0; n + 1];
        want[0] = 1;
        assert_eq!(betti, want);
    }
}

#[test]
fn three_torus_cohomology() {
    let t = build_torus_grid(&[3, 3, 3]).unwrap();
    let betti: Vec<usize> = cohomology(&t).iter().map(|g| g.betti).collect();
    assert_eq!(betti, vec![1, 3, 3, 1]);
}

#[test]
fn cochain_json_roundtrip() {
    let t = build_torus_grid(&[3, 3]).unwrap();
    let mut r = rng(4);
    let a = random_cochain(&t, 1, 0.5, &mut r);
    assert_eq!(IntCochain::from_json(&t, &a.to_json()).unwrap(), a);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn cup_bilinear(seed in any::<u64>()) {
        let t = build_torus_grid(&[3, 3]).unwrap();
        let mut r = rng(seed);
        let a = random_cochain(&t, 1, 0.5, &mut r);
        let a2 = random_cochain(&t, 1, 0.5, &mut r);
        let b = random_cochain(&t, 1, 0.5, &mut r);
        prop_assert_eq!(cup(&t, &a.add(&a2), &b), cup(&t, &a, &b).add(&cup(&t, &a2, &b)));
        prop_assert_eq!(cup(&t, &a.scale(3), &b), cup(&t, &a, &b).scale(3));
    }

    #[test]
    fn leibniz_prop(seed in any::<u64>(), p in 0usize..=2) {
        let t = build_torus_grid(&[3, 3, 3]).unwrap();
        let mut r = rng(seed);
        let q = 2 - p;
        let a = random_cochain(&t, p, 0.3, &mut r);
        let b = random_cochain(&t, q, 0.3, &mut r);
        let sign = if p % 2 == 0 { 1 } else { -1 };
        let rhs = cup(&t, &coboundary(&t, &a), &b).add(&cup(&t, &a, &coboundary(&t, &b)).scale(sign));
        prop_assert_eq!(coboundary(&t, &cup(&t, &a, &b)), rhs);
    }
}
