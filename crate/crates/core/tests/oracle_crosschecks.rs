//! Cross-checks of the hand-rolled numerical kernels against an independent
//! dense linear-algebra implementation.

use acgd_core::problems::{
    make_least_squares, make_lasso, make_simplex_qp, SyntheticSpec,
};
use acgd_core::{reduced_svd, top_singular_pair, Vector};
use nalgebra::DMatrix;
use rand::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn random_matrix(rows: usize, cols: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect()
}

#[test]
fn top_singular_value_matches_dense_svd() {
    for (rows, cols, seed) in [(5, 7, 1), (8, 3, 2), (6, 6, 3), (1, 9, 4), (10, 2, 5)] {
        let data = random_matrix(rows, cols, seed);
        let ours = top_singular_pair(&Vector::from_slice(&data).unwrap(), rows, cols, 1e-10, 10_000)
            .unwrap()
            .sigma;
        let reference = DMatrix::from_row_slice(rows, cols, &data)
            .svd(false, false)
            .singular_values[0];
        assert!(
            (ours - reference).abs() <= 1e-8 * reference.max(1.0),
            "shape {rows}x{cols}: {ours} vs {reference}"
        );
    }
}

#[test]
fn reduced_svd_spectrum_matches_dense_svd() {
    for (rows, cols, seed) in [(6, 4, 11), (4, 6, 12), (5, 5, 13)] {
        let data = random_matrix(rows, cols, seed);
        let (sigmas, _, _) =
            reduced_svd(&Vector::from_slice(&data).unwrap(), rows, cols, 1e-10, 10_000).unwrap();
        let reference = DMatrix::from_row_slice(rows, cols, &data)
            .svd(false, false)
            .singular_values;
        assert_eq!(sigmas.len(), rows.min(cols));
        for (k, s) in sigmas.iter().enumerate() {
            assert!(
                (s - reference[k]).abs() <= 1e-7 * reference[0].max(1.0),
                "sigma_{k}: {s} vs {}",
                reference[k]
            );
        }
    }
}

#[test]
fn reduced_svd_handles_rank_deficiency_like_dense_svd() {
    // Rank-2 matrix embedded in 5x4.
    let (rows, cols) = (5, 4);
    let u = random_matrix(rows, 2, 21);
    let v = random_matrix(cols, 2, 22);
    let mut data = vec![0.0; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            for k in 0..2 {
                data[i * cols + j] += u[i * 2 + k] * v[j * 2 + k];
            }
        }
    }
    let (sigmas, _, _) =
        reduced_svd(&Vector::from_slice(&data).unwrap(), rows, cols, 1e-10, 10_000).unwrap();
    let reference = DMatrix::from_row_slice(rows, cols, &data)
        .svd(false, false)
        .singular_values;
    for k in 0..2 {
        assert!((sigmas[k] - reference[k]).abs() <= 1e-7 * reference[0]);
    }
    for s in &sigmas[2..] {
        assert!(
            s.abs() <= 1e-9 * reference[0],
            "trailing singular value should vanish, got {s}"
        );
    }
}

#[test]
fn lasso_curvature_constant_matches_dense_svd() {
    let p = make_lasso(SyntheticSpec {
        m: 25,
        n: 40,
        tau: 4.0,
        seed: 31,
    })
    .unwrap();
    let reference = DMatrix::from_row_slice(25, 40, &p.a.data)
        .svd(false, false)
        .singular_values[0];
    assert!((p.sigma_max - reference).abs() <= 1e-8 * reference);
    assert!(
        (p.objective.known_lipschitz().unwrap() - 2.0 * reference * reference).abs()
            <= 1e-6 * reference * reference
    );
}

#[test]
fn least_squares_optimum_matches_dense_solver() {
    for (m, n, seed) in [(30usize, 12usize, 41u64), (12, 30, 42)] {
        let obj = make_least_squares(SyntheticSpec {
            m,
            n,
            tau: 3.0,
            seed,
        })
        .unwrap();
        // The builder plants a consistent system, so both solvers must find
        // an essentially zero residual.
        assert!(obj.known_optimum().unwrap().abs() < 1e-16);
    }
}

#[test]
fn simplex_qp_spectral_norm_matches_dense_eigen() {
    let p = make_simplex_qp(12, 51).unwrap();
    let q = DMatrix::from_row_slice(12, 12, &p.q.data);
    let eigs = q.symmetric_eigen().eigenvalues;
    let spectral = eigs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(
        (p.sigma_max - spectral).abs() <= 1e-8 * spectral.max(1.0),
        "{} vs {spectral}",
        p.sigma_max
    );
}
