#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cubeflow::cochain::{IntChain, IntCochain};
use cubeflow::cube::{FacePartition, Sign};
use cubeflow::geometry::GeoCochain;
use cubeflow::product::fixtures::{polyline_pieces, random_polyline, torus_top};
use cubeflow::{CubeId, CubicalComplex, GraphPiece};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_cochain(c: &CubicalComplex, d: usize, density: f64, rng: &mut ChaCha8Rng) -> IntCochain {
    let pairs: Vec<(CubeId, i64)> = c
        .cubes_of_dim(d)
        .iter()
        .filter_map(|&e| rng.gen_bool(density).then(|| (e, rng.gen_range(-3..=3))))
        .collect();
    IntCochain::from_pairs(c, d, pairs).unwrap()
}

pub fn random_chain(c: &CubicalComplex, d: usize, density: f64, rng: &mut ChaCha8Rng) -> IntChain {
    let pairs: Vec<(CubeId, i64)> = c
        .cubes_of_dim(d)
        .iter()
        .filter_map(|&e| rng.gen_bool(density).then(|| (e, rng.gen_range(-3..=3))))
        .collect();
    IntChain::from_pairs(c, d, pairs).unwrap()
}

/// Parity of a sequence of distinct integers by counting inversions.
pub fn inversion_sign(seq: &[usize]) -> Sign {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// Oracle for sh(F): list the free coordinates of F⁻, F and F⁺ straight
/// from the partition and count inversions.
pub fn shuffle_oracle(f: &FacePartition) -> Sign {
    let n = f.n();
    let in_set = |m: u32, i: usize| m >> i & 1 == 1;
    // free(F⁻) = F₁, free(F) = F₀₁, free(F⁺) = F₀
    let mut seq: Vec<usize> = (0..n).filter(|&i| in_set(f.f1(), i)).collect();
    seq.extend((0..n).filter(|&i| in_set(f.f01(), i)));
    seq.extend((0..n).filter(|&i| in_set(f.f0(), i)));
    inversion_sign(&seq)
}

/// One term of Δ([0,1]^{⊗n}) expanded factor by factor:
/// Δ[0,1] = [0] ⊗ [0,1] + [0,1] ⊗ [1], with the Koszul sign of moving the
/// right tensor factors past the left ones. `left_free` marks the factors
/// where [0,1] went to the left. Returns (left face, right face, sign).
pub fn koszul_term(n: usize, left_free: u32) -> (FacePartition, FacePartition, i64) {
    let all = (1u32 << n) - 1;
    let right_free = all & !left_free;
    let left = FacePartition::from_masks(n, right_free, left_free, 0).unwrap();
    let right = FacePartition::from_masks(n, 0, right_free, left_free).unwrap();
    // (a₁⊗b₁)⊗…⊗(aₙ⊗bₙ) ↦ (a₁⊗…⊗aₙ)⊗(b₁⊗…⊗bₙ): bᵢ passes aⱼ for i < j.
    let mut swaps = 0;
    for i in 0..n {
        for j in i + 1..n {
            if right_free >> i & 1 == 1 && left_free >> j & 1 == 1 {
                swaps += 1;
            }
        }
    }
    (left, right, if swaps % 2 == 0 { 1 } else { -1 })
}

/// Classical RK4 for ẋ = x(1 − x).
pub fn rk4(x0: f64, t: f64, steps: usize) -> f64 {
    let f = |x: f64| x * (1.0 - x);
    let h = t / steps as f64;
    let mut x = x0;
    for _ in 0..steps {
        let k1 = f(x);
        let k2 = f(x + 0.5 * h * k1);
        let k3 = f(x + 0.5 * h * k2);
        let k4 = f(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    x
}

pub const TORUS: [usize; 2] = [3, 3];

/// A codimension-one cochain on the 3×3 torus made of one to three random
/// transverse polylines, each with a random co-orientation.
pub fn random_polyline_cochain(c: &CubicalComplex, rng: &mut ChaCha8Rng) -> GeoCochain {
    let mut pieces = Vec::new();
    let arcs = rng.gen_range(1..=3);
    for _ in 0..arcs {
        let closed = rng.gen_bool(0.3);
        let pts = random_polyline(&TORUS, closed, 0.02, &mut || rng.gen::<f64>());
        let sign = if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg };
        pieces.extend(polyline_pieces(c, &TORUS, &pts, 0, sign).unwrap());
    }
    GeoCochain::new(c, 1, pieces).unwrap()
}

/// The vertical segment x₁ = a spanning the square at `pos` of the 3×3 torus.
pub fn vertical_segment(c: &CubicalComplex, pos: [usize; 2], a: f64, sign: Sign) -> GraphPiece {
    let cube = torus_top(c, &TORUS, &pos);
    GraphPiece::new(cube, 2, vec![1], vec![vec![a, 0.0], vec![a, 1.0]], vec![vec![0, 1]], sign).unwrap()
}

/// The full vertical cycle x₁ = a in the column of squares at x-index `col`.
pub fn vertical_cycle(c: &CubicalComplex, col: usize, a: f64, sign: Sign) -> GeoCochain {
    let pieces = (0..3).map(|r| vertical_segment(c, [col, r], a, sign)).collect();
    GeoCochain::new(c, 1, pieces).unwrap()
}
