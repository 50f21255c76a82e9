#![allow(dead_code)]

use orthoreg::{DesignMatrix, RealVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn normal_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Random dense problem: n ∈ [3, 200], k ∈ [1, min(8, n)], standard-normal
/// entries in both X and y.
pub fn random_problem(rng: &mut impl Rng) -> (DesignMatrix, RealVector) {
    let n = rng.random_range(3..=200usize);
    let k = rng.random_range(1..=8usize.min(n));
    random_problem_sized(rng, n, k)
}

pub fn random_problem_sized(rng: &mut impl Rng, n: usize, k: usize) -> (DesignMatrix, RealVector) {
    let x = DesignMatrix::from_column_major(n, k, normal_vec(rng, n * k)).unwrap();
    let y = RealVector::new(normal_vec(rng, n)).unwrap();
    (x, y)
}

/// One standard-normal regressor and response, n ∈ [3, 200].
pub fn random_simple(rng: &mut impl Rng) -> (RealVector, RealVector) {
    let n = rng.random_range(3..=200usize);
    let x = RealVector::new(normal_vec(rng, n)).unwrap();
    let y = RealVector::new(normal_vec(rng, n)).unwrap();
    (x, y)
}

pub fn max_abs_diff(a: &RealVector, b: &RealVector) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
