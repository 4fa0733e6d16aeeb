use std::sync::Arc;

use rand::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lmo::Region;
use crate::objective::Objective;
use crate::problems::linalg::{cholesky_solve, DenseMat};
use crate::vector::Vector;

/// Shape parameters shared by the random synthetic instances.
#[derive(Clone, Copy, Debug)]
pub struct SyntheticSpec {
    pub m: usize,
    pub n: usize,
    pub tau: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::InvalidParameter(
                "synthetic instance needs positive m and n".to_string(),
            ));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "radius tau must be positive and finite, got {}",
                self.tau
            )));
        }
        Ok(())
    }
}

/// Sparse recovery instance: minimize `||b - Ax||^2` over the l1 ball of
/// radius `tau`. The planted signal lies strictly inside the ball, so the
/// optimal value is exactly zero.
pub struct LassoProblem {
    pub objective: Objective,
    pub region: Region,
    pub x_true: Vector,
    pub a: Arc<DenseMat>,
    pub b: Arc<Vec<f64>>,
    pub sigma_max: f64,
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMat {
    let mut a = DenseMat::zeros(rows, cols);
    for v in a.data.iter_mut() {
        *v = rng.sample(StandardNormal);
    }
    a
}

/// Fraction of the ball radius carried by the planted signal. With `tau`
/// Gaussian nonzeros the raw expected l1 mass is `tau E|N(0,1)| ~ 0.8 tau`;
/// pinning it there keeps the expected geometry while making feasibility
/// (and hence a zero optimal value) deterministic instead of seed-dependent.
const PLANTED_MASS: f64 = 0.8;

/// Planted sparse vector: `nnz` distinct coordinates with Gaussian values,
/// rescaled so its l1 norm is `PLANTED_MASS * tau` (strictly inside the
/// ball).
fn planted_signal(rng: &mut ChaCha8Rng, n: usize, nnz: usize, tau: f64) -> Vec<f64> {
    let nnz = nnz.clamp(1, n);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..nnz {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    let mut x = vec![0.0; n];
    loop {
        let mut l1 = 0.0;
        for &i in &idx[..nnz] {
            let v: f64 = rng.sample(StandardNormal);
            x[i] = v;
            l1 += v.abs();
        }
        if l1 > 0.0 {
            let scale = PLANTED_MASS * tau / l1;
            for &i in &idx[..nnz] {
                x[i] *= scale;
            }
            return x;
        }
    }
}

fn least_squares_objective(
    a: Arc<DenseMat>,
    b: Arc<Vec<f64>>,
    name: &str,
    sigma_max: f64,
) -> Objective {
    let n = a.cols;
    let (av, bv) = (Arc::clone(&a), Arc::clone(&b));
    let value = move |x: &[f64]| -> f64 {
        let ax = av.matvec(x);
        ax.iter()
            .zip(bv.iter())
            .map(|(p, q)| (q - p) * (q - p))
            .sum()
    };
    let (ag, bg) = (Arc::clone(&a), Arc::clone(&b));
    let grad = move |x: &[f64]| -> Vec<f64> {
        let mut r = ag.matvec(x);
        for (ri, bi) in r.iter_mut().zip(bg.iter()) {
            *ri -= bi;
        }
        let mut g = ag.t_matvec(&r);
        for gi in g.iter_mut() {
            *gi *= 2.0;
        }
        g
    };
    Objective::new(n, name, value, grad).with_lipschitz(2.0 * sigma_max * sigma_max)
}

pub fn make_lasso(spec: SyntheticSpec) -> Result<LassoProblem> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let a = Arc::new(gaussian_matrix(&mut rng, spec.m, spec.n));
    let nnz = (spec.tau.round() as usize).max(1);
    let x_true = Vector::new(planted_signal(&mut rng, spec.n, nnz, spec.tau))?;
    let b = Arc::new(a.matvec(x_true.as_slice()));
    let sigma_max = a.sigma_max()?;
    let objective =
        least_squares_objective(Arc::clone(&a), Arc::clone(&b), "lasso", sigma_max).with_optimum(0.0);
    Ok(LassoProblem {
        objective,
        region: Region::l1_ball(spec.tau)?,
        x_true,
        a,
        b,
        sigma_max,
    })
}

/// Unconstrained least squares on a consistent system. The optimal value is
/// computed by solving the normal equations directly, so runs can report a
/// true functional gap.
pub fn make_least_squares(spec: SyntheticSpec) -> Result<Objective> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let a = Arc::new(gaussian_matrix(&mut rng, spec.m, spec.n));
    let nnz = (spec.tau.round() as usize).max(1);
    let x_true = planted_signal(&mut rng, spec.n, nnz, spec.tau);
    let b = Arc::new(a.matvec(&x_true));
    let sigma_max = a.sigma_max()?;

    // Normal-equations solution; for wide systems solve the dual system so a
    // consistent right-hand side still yields the exact minimum.
    let x_hat = if spec.m >= spec.n {
        cholesky_solve(&a.gram(), &a.t_matvec(&b))?
    } else {
        let y = cholesky_solve(&a.outer_gram(), &b)?;
        a.t_matvec(&y)
    };
    let r = a.matvec(&x_hat);
    let f_star: f64 = r
        .iter()
        .zip(b.iter())
        .map(|(p, q)| (q - p) * (q - p))
        .sum();

    Ok(
        least_squares_objective(a, b, "least-squares", sigma_max)
            .with_optimum(f_star),
    )
}

/// Separable strongly convex quadratic `sum_i c_i (x_i - z_i)^2` with
/// curvature weights spaced linearly in `[c_min, c_max]` and a seeded center.
pub struct QuadraticProblem {
    pub objective: Objective,
    pub center: Vector,
    pub c_min: f64,
    pub c_max: f64,
}

pub fn make_quadratic(n: usize, c_min: f64, c_max: f64, seed: u64) -> Result<QuadraticProblem> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "quadratic needs a positive dimension".to_string(),
        ));
    }
    if !(c_min.is_finite() && c_max.is_finite() && 0.0 < c_min && c_min <= c_max) {
        return Err(Error::InvalidParameter(format!(
            "curvature range must satisfy 0 < c_min <= c_max, got [{c_min}, {c_max}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: Arc<Vec<f64>> = Arc::new(
        (0..n)
            .map(|i| {
                if n == 1 {
                    c_min
                } else {
                    c_min + (c_max - c_min) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    );
    let z: Arc<Vec<f64>> = Arc::new((0..n).map(|_| rng.sample(StandardNormal)).collect());
    let (cv, zv) = (Arc::clone(&c), Arc::clone(&z));
    let value = move |x: &[f64]| -> f64 {
        x.iter()
            .zip(cv.iter().zip(zv.iter()))
            .map(|(xi, (ci, zi))| ci * (xi - zi) * (xi - zi))
            .sum()
    };
    let (cg, zg) = (Arc::clone(&c), Arc::clone(&z));
    let grad = move |x: &[f64]| -> Vec<f64> {
        x.iter()
            .zip(cg.iter().zip(zg.iter()))
            .map(|(xi, (ci, zi))| 2.0 * ci * (xi - zi))
            .collect()
    };
    let objective = Objective::new(n, "quadratic", value, grad)
        .with_lipschitz(2.0 * c_max)
        .with_optimum(0.0);
    Ok(QuadraticProblem {
        objective,
        center: Vector::new(z.as_ref().clone())?,
        c_min,
        c_max,
    })
}

/// Matrix balancing: minimize `sum_ij a_ij exp(x_i - x_j)` over a coordinate
/// box. The weight matrix is a sparse random pattern, symmetrized, with a
/// small diagonal shift so every node participates.
pub fn make_matrix_balancing(
    n: usize,
    lower: f64,
    upper: f64,
    avg_degree: f64,
    seed: u64,
) -> Result<(Objective, Region)> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "matrix balancing needs a positive dimension".to_string(),
        ));
    }
    if !(avg_degree.is_finite() && avg_degree >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "average degree must be non-negative, got {avg_degree}"
        )));
    }
    let region = Region::interval_box(
        Vector::new(vec![lower; n])?,
        Vector::new(vec![upper; n])?,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = (avg_degree / n as f64).min(1.0);
    let mut dense = vec![0.0_f64; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random::<f64>() < p {
                dense[i * n + j] = rng.random::<f64>();
            }
        }
    }
    // Symmetrize and shift the diagonal; keep only the nonzero pattern.
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut v = (dense[i * n + j] + dense[j * n + i]).abs();
            if i == j {
                v += 0.05;
            }
            if v != 0.0 {
                entries.push((i, j, v));
            }
        }
    }
    let entries = Arc::new(entries);

    // The weight matrix is symmetric, hence balanced (row sums equal column
    // sums), so any constant vector is a global minimizer by convexity and
    // the optimal value is the plain entry sum. A conservative curvature
    // bound comes from the Hessian quadratic form: for unit z,
    // sum a_ij e^{x_i-x_j} (z_i-z_j)^2 <= 2 e^{u-l} max_i (row_i + col_i).
    let total: f64 = entries.iter().map(|&(_, _, a)| a).sum();
    let mut line_sums = vec![0.0_f64; n];
    for &(i, j, a) in entries.iter() {
        line_sums[i] += a;
        line_sums[j] += a;
    }
    let max_line = line_sums.iter().fold(0.0_f64, |m, v| m.max(*v));
    let lipschitz_bound = 2.0 * (upper - lower).exp() * max_line;

    let ev = Arc::clone(&entries);
    let value = move |x: &[f64]| -> f64 {
        ev.iter().map(|&(i, j, a)| a * (x[i] - x[j]).exp()).sum()
    };
    let eg = Arc::clone(&entries);
    let grad = move |x: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        for &(i, j, a) in eg.iter() {
            let e = a * (x[i] - x[j]).exp();
            g[i] += e;
            g[j] -= e;
        }
        g
    };
    let mut objective = Objective::new(n, "matrix-balancing", value, grad).with_optimum(total);
    // An extreme box width overflows the exponential; leave the constant
    // unset in that case rather than record a useless infinity.
    if lipschitz_bound.is_finite() && lipschitz_bound > 0.0 {
        objective = objective.with_lipschitz(lipschitz_bound);
    }
    Ok((objective, region))
}

/// Quadratic form `x^T Q x` over the unit simplex, with `Q` a symmetrized
/// Gaussian matrix. Generally indefinite, so the problem is non-convex.
pub struct SimplexQpProblem {
    pub objective: Objective,
    pub region: Region,
    pub q: Arc<DenseMat>,
    pub sigma_max: f64,
}

pub fn make_simplex_qp(n: usize, seed: u64) -> Result<SimplexQpProblem> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "simplex qp needs a positive dimension".to_string(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(&mut rng, n, n);
    let mut q = DenseMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            q.set(i, j, 0.5 * (g.get(i, j) + g.get(j, i)));
        }
    }
    let q = Arc::new(q);
    let sigma_max = q.sigma_max()?;
    let qv = Arc::clone(&q);
    let value = move |x: &[f64]| -> f64 {
        let qx = qv.matvec(x);
        x.iter().zip(qx.iter()).map(|(a, b)| a * b).sum()
    };
    let qg = Arc::clone(&q);
    let grad = move |x: &[f64]| -> Vec<f64> {
        let mut qx = qg.matvec(x);
        for v in qx.iter_mut() {
            *v *= 2.0;
        }
        qx
    };
    let objective =
        Objective::new(n, "simplex-qp", value, grad).with_lipschitz(2.0 * sigma_max);
    Ok(SimplexQpProblem {
        objective,
        region: Region::simplex(1.0)?,
        q,
        sigma_max,
    })
}

/// Robust matrix completion: Huber loss of the misfit on a fixed observed
/// subset of entries, over a nuclear-norm ball. Variables are the matrix
/// entries in row-major order.
pub struct HuberCompletionProblem {
    pub objective: Objective,
    pub region: Region,
    pub y: Arc<Vec<f64>>,
    pub observed: Arc<Vec<(usize, usize)>>,
    pub rows: usize,
    pub cols: usize,
}

pub fn make_huber_completion(
    rows: usize,
    cols: usize,
    frac_observed: f64,
    rho: f64,
    tau: f64,
    seed: u64,
) -> Result<HuberCompletionProblem> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter(
            "completion needs a positive shape".to_string(),
        ));
    }
    if !(frac_observed > 0.0 && frac_observed <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "observed fraction must lie in (0, 1], got {frac_observed}"
        )));
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "huber threshold must be positive, got {rho}"
        )));
    }
    let region = Region::nuclear_ball(tau, rows, cols)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Low-rank ground truth plus small Gaussian noise.
    let rank = 3.min(rows).min(cols);
    let u = gaussian_matrix(&mut rng, rows, rank);
    let v = gaussian_matrix(&mut rng, cols, rank);
    let mut y = vec![0.0_f64; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let mut s = 0.0;
            for k in 0..rank {
                s += u.get(i, k) * v.get(j, k);
            }
            let noise: f64 = rng.sample(StandardNormal);
            y[i * cols + j] = s + 0.01 * noise;
        }
    }
    let y = Arc::new(y);

    // Sample exactly round(frac * rows * cols) entries, at least one, without
    // replacement so the observed set is never empty.
    let total = rows * cols;
    let k = ((frac_observed * total as f64).round() as usize).clamp(1, total);
    let mut all: Vec<usize> = (0..total).collect();
    for i in 0..k {
        let j = rng.random_range(i..total);
        all.swap(i, j);
    }
    let mut observed: Vec<(usize, usize)> = all[..k].iter().map(|&t| (t / cols, t % cols)).collect();
    observed.sort_unstable();
    let observed = Arc::new(observed);

    let count = observed.len() as f64;
    let (yv, ov) = (Arc::clone(&y), Arc::clone(&observed));
    let value = move |x: &[f64]| -> f64 {
        let mut s = 0.0;
        for &(i, j) in ov.iter() {
            let a = yv[i * cols + j] - x[i * cols + j];
            let abs = a.abs();
            s += if abs <= rho {
                0.5 * a * a
            } else {
                rho * (abs - 0.5 * rho)
            };
        }
        s / count
    };
    let (yg, og) = (Arc::clone(&y), Arc::clone(&observed));
    let grad = move |x: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        for &(i, j) in og.iter() {
            let a = yg[i * cols + j] - x[i * cols + j];
            // Huber derivative is the clamp of the misfit to [-rho, rho].
            g[i * cols + j] = -a.clamp(-rho, rho) / count;
        }
        g
    };
    let objective = Objective::new(rows * cols, "huber-completion", value, grad);
    Ok(HuberCompletionProblem {
        objective,
        region,
        y,
        observed,
        rows,
        cols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{norm, NormId};
    use crate::objective::finite_diff_gradient;

    fn spec() -> SyntheticSpec {
        SyntheticSpec {
            m: 20,
            n: 30,
            tau: 5.0,
            seed: 7,
        }
    }

    fn v(x: &[f64]) -> Vector {
        Vector::from_slice(x).unwrap()
    }

    #[test]
    fn lasso_planted_signal_is_interior_and_consistent() {
        let p = make_lasso(spec()).unwrap();
        let l1 = norm(NormId::L1, &p.x_true);
        assert!(
            (l1 - 0.8 * 5.0).abs() < 1e-12,
            "planted l1 mass should be 0.8 tau, got {l1}"
        );
        let at_truth = p.objective.value(&p.x_true).unwrap();
        assert!(
            at_truth < 1e-20,
            "objective at the planted signal should vanish, got {at_truth}"
        );
        assert_eq!(p.objective.known_optimum(), Some(0.0));
    }

    #[test]
    fn lasso_gradient_matches_finite_differences() {
        let p = make_lasso(spec()).unwrap();
        let x = v(&(0..30).map(|i| 0.1 * (i as f64 - 15.0)).collect::<Vec<_>>());
        let g = p.objective.grad(&x).unwrap();
        let fd = finite_diff_gradient(&p.objective, &x, 1e-6).unwrap();
        let scale = g.iter().fold(1.0_f64, |m, t| m.max(t.abs()));
        for (a, b) in g.iter().zip(fd.iter()) {
            assert!(
                (a - b).abs() / scale < 1e-5,
                "analytic {a} vs finite-diff {b}"
            );
        }
    }

    #[test]
    fn least_squares_reports_near_zero_optimum_for_consistent_data() {
        let obj = make_least_squares(spec()).unwrap();
        let f_star = obj.known_optimum().unwrap();
        assert!(
            f_star.abs() < 1e-18,
            "consistent system should have ~zero residual, got {f_star}"
        );
    }

    #[test]
    fn least_squares_handles_wide_systems() {
        let obj = make_least_squares(SyntheticSpec {
            m: 10,
            n: 25,
            tau: 3.0,
            seed: 11,
        })
        .unwrap();
        assert!(obj.known_optimum().unwrap().abs() < 1e-18);
    }

    #[test]
    fn quadratic_reaches_zero_at_center() {
        let q = make_quadratic(8, 0.5, 4.0, 3).unwrap();
        let val = q.objective.value(&q.center).unwrap();
        assert_eq!(val, 0.0, "quadratic must vanish exactly at its center");
        assert_eq!(q.objective.known_lipschitz(), Some(8.0));
    }

    #[test]
    fn quadratic_gradient_matches_finite_differences() {
        let q = make_quadratic(6, 1.0, 10.0, 5).unwrap();
        let x = v(&[0.3, -1.2, 0.0, 2.5, -0.7, 1.1]);
        let g = q.objective.grad(&x).unwrap();
        let fd = finite_diff_gradient(&q.objective, &x, 1e-6).unwrap();
        for (a, b) in g.iter().zip(fd.iter()) {
            assert!((a - b).abs() < 1e-4, "analytic {a} vs finite-diff {b}");
        }
    }

    #[test]
    fn matrix_balancing_gradient_matches_finite_differences() {
        let (obj, region) = make_matrix_balancing(12, -1.0, 1.0, 4.0, 9).unwrap();
        region.check_dim(12).unwrap();
        let x = v(&(0..12).map(|i| 0.1 * i as f64 - 0.5).collect::<Vec<_>>());
        let g = obj.grad(&x).unwrap();
        let fd = finite_diff_gradient(&obj, &x, 1e-6).unwrap();
        for (a, b) in g.iter().zip(fd.iter()) {
            assert!((a - b).abs() < 1e-4, "analytic {a} vs finite-diff {b}");
        }
        // Shifting all coordinates by a constant leaves the objective fixed.
        let shifted = v(&x.iter().map(|t| t + 0.3).collect::<Vec<_>>());
        let f0 = obj.value(&x).unwrap();
        let f1 = obj.value(&shifted).unwrap();
        assert!((f0 - f1).abs() < 1e-9 * f0.abs().max(1.0));
    }

    #[test]
    fn simplex_qp_matrix_is_symmetric() {
        let p = make_simplex_qp(10, 2).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                assert_eq!(p.q.get(i, j), p.q.get(j, i), "Q must be symmetric");
            }
        }
        let x = v(&[0.1; 10]);
        let g = p.objective.grad(&x).unwrap();
        let fd = finite_diff_gradient(&p.objective, &x, 1e-6).unwrap();
        for (a, b) in g.iter().zip(fd.iter()) {
            assert!((a - b).abs() < 1e-4);
        }
    }

    #[test]
    fn huber_completion_vanishes_on_perfect_fit() {
        let p = make_huber_completion(6, 5, 0.5, 1.0, 10.0, 4).unwrap();
        // Start from the ground truth restricted to observed entries: the
        // misfit is zero there, so the loss and gradient must vanish.
        let x = v(p.y.as_ref());
        assert_eq!(p.objective.value(&x).unwrap(), 0.0);
        let g = p.objective.grad(&x).unwrap();
        assert!(g.iter().all(|t| *t == 0.0));
    }

    #[test]
    fn huber_completion_gradient_matches_finite_differences() {
        let p = make_huber_completion(5, 4, 0.7, 0.3, 5.0, 8).unwrap();
        let x = v(&[0.05; 20]);
        let g = p.objective.grad(&x).unwrap();
        let fd = finite_diff_gradient(&p.objective, &x, 1e-7).unwrap();
        for (a, b) in g.iter().zip(fd.iter()) {
            assert!((a - b).abs() < 1e-4, "analytic {a} vs finite-diff {b}");
        }
    }

    #[test]
    fn huber_derivative_is_continuous_at_the_threshold() {
        // One observed entry, misfit exactly at +/- rho: the quadratic and
        // linear branches of the derivative must agree to tight tolerance.
        let rho = 0.8;
        let p = make_huber_completion(1, 1, 1.0, rho, 5.0, 1).unwrap();
        let y = p.y[0];
        for sign in [-1.0, 1.0] {
            let eps = 1e-9;
            let below = p.objective.grad(&v(&[y - sign * (rho - eps)])).unwrap()[0];
            let above = p.objective.grad(&v(&[y - sign * (rho + eps)])).unwrap()[0];
            assert!(
                (below - above).abs() < 1e-8,
                "derivative jump at the huber threshold: {below} vs {above}"
            );
        }
    }

    #[test]
    fn huber_rejects_bad_fraction() {
        assert!(make_huber_completion(3, 3, 0.0, 1.0, 1.0, 0).is_err());
        assert!(make_huber_completion(3, 3, 1.5, 1.0, 1.0, 0).is_err());
    }
}
