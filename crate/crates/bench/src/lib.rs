//! Shared fixtures for the benchmark targets: deterministic inputs so runs
//! are comparable across machines and revisions.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use acgd_core::problems::{make_lasso, make_quadratic, LassoProblem, QuadraticProblem, SyntheticSpec};
use acgd_core::Vector;

pub const BENCH_SEED: u64 = 1234;

/// Standard normal draws via Box-Muller on the uniform generator.
pub fn gaussian_vector(n: usize, seed: u64) -> Vector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n)
        .map(|_| {
            let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
            let u2: f64 = rng.random();
            (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
        })
        .collect();
    Vector::new(data).expect("finite samples")
}

/// Small dense regression instance: big enough that matvecs dominate, small
/// enough that a full solve fits in a benchmark sample.
pub fn bench_lasso() -> LassoProblem {
    make_lasso(SyntheticSpec {
        m: 40,
        n: 80,
        tau: 4.0,
        seed: BENCH_SEED,
    })
    .expect("fixture builds")
}

pub fn bench_quadratic(n: usize) -> QuadraticProblem {
    make_quadratic(n, 1.0, 10.0, BENCH_SEED).expect("fixture builds")
}
