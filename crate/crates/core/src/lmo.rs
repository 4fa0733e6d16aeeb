use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::norm::{norm, NormId};
use crate::vector::Vector;

/// Fixed seed for the power-iteration start vector. The linear minimization
/// oracle must be a deterministic function of its input, so this is not
/// configurable.
const POWER_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

/// Default power-iteration controls used by the matrix oracles.
pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 10_000;

/// Polytopes with at most this many coordinates get literal vertex
/// enumeration in `brute_force_lmo`; larger ones use the coordinate-separable
/// exact minimum, which agrees with enumeration by linearity.
const ENUMERATION_LIMIT: usize = 16;

/// Feasible regions with closed-form linear minimization oracles.
///
/// Matrix regions treat the vector as a row-major `rows x cols` matrix.
/// Invariants (enforced by the constructors): `tau > 0`, box bounds satisfy
/// `lower[i] <= upper[i]`, matrix shapes are positive.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    L2Ball { tau: f64 },
    L1Ball { tau: f64 },
    LInfBall { tau: f64 },
    /// `{ v : v >= 0, sum v = tau }`.
    Simplex { tau: f64 },
    /// `{ v : lower[i] <= v[i] <= upper[i] }`.
    Box { lower: Vector, upper: Vector },
    NuclearBall { tau: f64, rows: usize, cols: usize },
    SpectralBall { tau: f64, rows: usize, cols: usize },
}

impl Region {
    pub fn l2_ball(tau: f64) -> Result<Region> {
        check_tau(tau)?;
        Ok(Region::L2Ball { tau })
    }

    pub fn l1_ball(tau: f64) -> Result<Region> {
        check_tau(tau)?;
        Ok(Region::L1Ball { tau })
    }

    pub fn linf_ball(tau: f64) -> Result<Region> {
        check_tau(tau)?;
        Ok(Region::LInfBall { tau })
    }

    pub fn simplex(tau: f64) -> Result<Region> {
        check_tau(tau)?;
        Ok(Region::Simplex { tau })
    }

    pub fn interval_box(lower: Vector, upper: Vector) -> Result<Region> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        for i in 0..lower.len() {
            if lower[i] > upper[i] {
                return Err(Error::InvalidParameter(format!(
                    "box bound {i} has lower {} > upper {}",
                    lower[i], upper[i]
                )));
            }
        }
        Ok(Region::Box { lower, upper })
    }

    pub fn nuclear_ball(tau: f64, rows: usize, cols: usize) -> Result<Region> {
        check_tau(tau)?;
        check_shape(rows, cols)?;
        Ok(Region::NuclearBall { tau, rows, cols })
    }

    pub fn spectral_ball(tau: f64, rows: usize, cols: usize) -> Result<Region> {
        check_tau(tau)?;
        check_shape(rows, cols)?;
        Ok(Region::SpectralBall { tau, rows, cols })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Region::L2Ball { .. } => "l2-ball",
            Region::L1Ball { .. } => "l1-ball",
            Region::LInfBall { .. } => "linf-ball",
            Region::Simplex { .. } => "simplex",
            Region::Box { .. } => "box",
            Region::NuclearBall { .. } => "nuclear-ball",
            Region::SpectralBall { .. } => "spectral-ball",
        }
    }

    /// Verifies `n` is a dimension this region can live in.
    pub fn check_dim(&self, n: usize) -> Result<()> {
        let expected = match self {
            Region::Box { lower, .. } => lower.len(),
            Region::NuclearBall { rows, cols, .. }
            | Region::SpectralBall { rows, cols, .. } => rows * cols,
            _ => return Ok(()),
        };
        if n != expected {
            return Err(Error::DimensionMismatch { expected, actual: n });
        }
        Ok(())
    }

    /// Membership test with an additive slack of `tol` on every constraint.
    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool> {
        self.check_dim(x.len())?;
        Ok(match self {
            Region::L2Ball { tau } => norm(NormId::L2, x) <= tau + tol,
            Region::L1Ball { tau } => norm(NormId::L1, x) <= tau + tol,
            Region::LInfBall { tau } => norm(NormId::LInf, x) <= tau + tol,
            Region::Simplex { tau } => {
                x.iter().all(|&v| v >= -tol)
                    && (x.iter().sum::<f64>() - tau).abs() <= tol
            }
            Region::Box { lower, upper } => (0..x.len())
                .all(|i| x[i] >= lower[i] - tol && x[i] <= upper[i] + tol),
            Region::NuclearBall { tau, rows, cols } => {
                let (sigmas, _, _) = reduced_svd(x, *rows, *cols, POWER_TOL, POWER_MAX_ITER)?;
                sigmas.iter().sum::<f64>() <= tau + tol
            }
            Region::SpectralBall { tau, rows, cols } => {
                let pair = top_singular_pair(x, *rows, *cols, POWER_TOL, POWER_MAX_ITER)?;
                pair.sigma <= tau + tol
            }
        })
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "region radius must be positive and finite, got {tau}"
        )));
    }
    Ok(())
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter(format!(
            "matrix regions need positive shape, got {rows}x{cols}"
        )));
    }
    Ok(())
}

/// Top singular triple of a row-major matrix: unit `u`, `v` with
/// `X v = sigma * u` up to the iteration tolerance.
#[derive(Clone, Debug)]
pub struct SingularPair {
    pub sigma: f64,
    pub u: Vector,
    pub v: Vector,
}

/// Sign with `sign(0) = 0`; ties in the oracles resolve by lowest index.
fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `argmin_{v in region} <x, v>`, in closed form per region.
///
/// Deterministic: identical inputs return bit-identical outputs, with ties
/// broken toward the lowest index. At `x = 0` the balls return the zero
/// matrix or vector (any feasible point is optimal) except the l1 ball and
/// simplex, which return their lowest-index vertex.
pub fn lmo(region: &Region, x: &Vector) -> Result<Vector> {
    region.check_dim(x.len())?;
    let n = x.len();
    match region {
        Region::L2Ball { tau } => {
            let nrm = norm(NormId::L2, x);
            if nrm == 0.0 {
                return Ok(Vector::zeros(n));
            }
            let scale = -tau / nrm;
            Vector::new(x.iter().map(|v| scale * v).collect())
        }
        Region::L1Ball { tau } => {
            let mut j = 0;
            for i in 1..n {
                if x[i].abs() > x[j].abs() {
                    j = i;
                }
            }
            let mut out = vec![0.0; n];
            if x[j] == 0.0 {
                out[0] = *tau;
            } else {
                out[j] = -tau * sign(x[j]);
            }
            Vector::new(out)
        }
        Region::LInfBall { tau } => {
            Vector::new(x.iter().map(|&v| -tau * sign(v)).collect())
        }
        Region::Simplex { tau } => {
            let mut j = 0;
            for i in 1..n {
                if x[i] < x[j] {
                    j = i;
                }
            }
            let mut out = vec![0.0; n];
            out[j] = *tau;
            Vector::new(out)
        }
        Region::Box { lower, upper } => {
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                // x[i] == 0 leaves the coordinate free; ties go to the lower bound.
                out.push(if x[i] < 0.0 { upper[i] } else { lower[i] });
            }
            Vector::new(out)
        }
        Region::NuclearBall { tau, rows, cols } => {
            let pair = top_singular_pair(x, *rows, *cols, POWER_TOL, POWER_MAX_ITER)?;
            let mut out = vec![0.0; n];
            for i in 0..*rows {
                for j in 0..*cols {
                    out[i * cols + j] = -tau * pair.u[i] * pair.v[j];
                }
            }
            Vector::new(out)
        }
        Region::SpectralBall { tau, rows, cols } => {
            let (_, us, vs) = reduced_svd(x, *rows, *cols, POWER_TOL, POWER_MAX_ITER)?;
            let mut out = vec![0.0; n];
            for (u, v) in us.iter().zip(&vs) {
                for i in 0..*rows {
                    for j in 0..*cols {
                        out[i * cols + j] -= tau * u[i] * v[j];
                    }
                }
            }
            Vector::new(out)
        }
    }
}

fn matvec(g: &[f64], rows: usize, cols: usize, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; rows];
    for i in 0..rows {
        let row = &g[i * cols..(i + 1) * cols];
        out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

fn t_matvec(g: &[f64], rows: usize, cols: usize, u: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; cols];
    for i in 0..rows {
        let row = &g[i * cols..(i + 1) * cols];
        for j in 0..cols {
            out[j] += row[j] * u[i];
        }
    }
    out
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn unit_random(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let nrm = l2(&v);
        if nrm > 0.0 {
            return v.iter().map(|a| a / nrm).collect();
        }
    }
}

fn basis(n: usize, j: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[j] = 1.0;
    e
}

/// Largest singular value and its singular vectors, by power iteration on
/// `X^T X` from a fixed seeded start. Convergence is declared when the
/// Rayleigh quotient is stable to a relative `tol`.
pub fn top_singular_pair(
    x: &Vector,
    rows: usize,
    cols: usize,
    tol: f64,
    max_iter: usize,
) -> Result<SingularPair> {
    check_shape(rows, cols)?;
    if x.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            expected: rows * cols,
            actual: x.len(),
        });
    }
    let (sigma, u, v) = power_top_pair(x.as_slice(), rows, cols, tol, max_iter)?;
    Ok(SingularPair {
        sigma,
        u: Vector::new(u)?,
        v: Vector::new(v)?,
    })
}

fn power_top_pair(
    g: &[f64],
    rows: usize,
    cols: usize,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    if l2(g) == 0.0 {
        return Ok((0.0, basis(rows, 0), basis(cols, 0)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut v = unit_random(&mut rng, cols);
    let mut converged = false;
    for _ in 0..max_iter {
        let gv = matvec(g, rows, cols, &v);
        let w = t_matvec(g, rows, cols, &gv);
        let lam: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let nw = l2(&w);
        if nw == 0.0 {
            // Start vector landed in the null space; draw again.
            v = unit_random(&mut rng, cols);
            continue;
        }
        // Eigen-equation residual of the unit iterate; unlike the Rayleigh
        // quotient it bounds the *vector* error, which the oracle output
        // inherits directly.
        let res: f64 = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - lam * vi) * (wi - lam * vi))
            .sum::<f64>()
            .sqrt();
        v = w.iter().map(|a| a / nw).collect();
        if res <= tol * lam.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::PowerIterationDiverged { max_iter });
    }
    let gv = matvec(g, rows, cols, &v);
    let sigma = l2(&gv);
    if sigma == 0.0 {
        return Ok((0.0, basis(rows, 0), v));
    }
    let u = gv.iter().map(|a| a / sigma).collect();
    Ok((sigma, u, v))
}

fn orthogonalize_against(v: &mut [f64], others: &[Vec<f64>]) {
    // Two passes of classical Gram-Schmidt keep the loss of orthogonality
    // at the roundoff level.
    for _ in 0..2 {
        for o in others {
            let c: f64 = v.iter().zip(o).map(|(a, b)| a * b).sum();
            for (vi, oi) in v.iter_mut().zip(o) {
                *vi -= c * oi;
            }
        }
    }
}

fn complete_basis(found: &[Vec<f64>], n: usize) -> Option<Vec<f64>> {
    for j in 0..n {
        let mut cand = basis(n, j);
        orthogonalize_against(&mut cand, found);
        let nrm = l2(&cand);
        if nrm > 0.5 {
            for c in &mut cand {
                *c /= nrm;
            }
            return Some(cand);
        }
    }
    None
}

/// Singular values with the left and right singular vectors as column lists:
/// `(sigma, u_columns, v_columns)`, all of length `min(rows, cols)`.
pub type SvdFactors = (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>);

/// Reduced SVD by repeated deflation: peel the top singular triple, subtract
/// its rank-one contribution, repeat `min(rows, cols)` times. Factors are
/// re-orthogonalized against earlier ones so `U` and `V` have orthonormal
/// columns to roundoff even when singular values repeat or vanish.
///
/// Intended for the desk-scale matrices the spectral oracle sees; cost grows
/// with `min(rows, cols)` full power iterations.
pub fn reduced_svd(
    x: &Vector,
    rows: usize,
    cols: usize,
    tol: f64,
    max_iter: usize,
) -> Result<SvdFactors> {
    check_shape(rows, cols)?;
    if x.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            expected: rows * cols,
            actual: x.len(),
        });
    }
    let r = rows.min(cols);
    let mut g = x.as_slice().to_vec();
    let mut sigmas = Vec::with_capacity(r);
    let mut us: Vec<Vec<f64>> = Vec::with_capacity(r);
    let mut vs: Vec<Vec<f64>> = Vec::with_capacity(r);
    let mut sigma_top = 0.0_f64;
    while us.len() < r {
        let fro = l2(&g);
        if fro <= 1e-13 * sigma_top.max(1.0) {
            break;
        }
        let (_, mut u, mut v) = power_top_pair(&g, rows, cols, tol, max_iter)?;
        orthogonalize_against(&mut u, &us);
        orthogonalize_against(&mut v, &vs);
        let (nu, nv) = (l2(&u), l2(&v));
        if nu <= 1e-8 || nv <= 1e-8 {
            // The deflated residue points back along directions already
            // taken; what is left is numerically rank-deficient.
            break;
        }
        for a in &mut u {
            *a /= nu;
        }
        for a in &mut v {
            *a /= nv;
        }
        // Recompute sigma for the cleaned pair and flip u so it is positive.
        let gv = matvec(&g, rows, cols, &v);
        let mut sigma: f64 = u.iter().zip(&gv).map(|(a, b)| a * b).sum();
        if sigma < 0.0 {
            sigma = -sigma;
            for a in &mut u {
                *a = -*a;
            }
        }
        for i in 0..rows {
            for j in 0..cols {
                g[i * cols + j] -= sigma * u[i] * v[j];
            }
        }
        sigma_top = sigma_top.max(sigma);
        sigmas.push(sigma);
        us.push(u);
        vs.push(v);
    }
    while us.len() < r {
        let u = complete_basis(&us, rows).ok_or(Error::PowerIterationDiverged { max_iter })?;
        let v = complete_basis(&vs, cols).ok_or(Error::PowerIterationDiverged { max_iter })?;
        sigmas.push(0.0);
        us.push(u);
        vs.push(v);
    }
    Ok((sigmas, us, vs))
}

/// Exact diameter of a region in norm `p`, for an ambient dimension `n`.
///
/// Matrix balls are measured in the Frobenius norm (l2 of the flattening);
/// other norms on them are a capability error.
pub fn diameter(region: &Region, p: NormId, n: usize) -> Result<f64> {
    region.check_dim(n)?;
    if n == 0 {
        return Err(Error::EmptyVector);
    }
    let nf = n as f64;
    Ok(match (region, p) {
        (Region::L2Ball { tau }, NormId::L1) => 2.0 * tau * nf.sqrt(),
        (Region::L2Ball { tau }, NormId::L2) => 2.0 * tau,
        (Region::L2Ball { tau }, NormId::LInf) => 2.0 * tau,
        (Region::L1Ball { tau }, _) => 2.0 * tau,
        (Region::LInfBall { tau }, NormId::L1) => 2.0 * tau * nf,
        (Region::LInfBall { tau }, NormId::L2) => 2.0 * tau * nf.sqrt(),
        (Region::LInfBall { tau }, NormId::LInf) => 2.0 * tau,
        (Region::Simplex { .. }, _) if n == 1 => 0.0,
        (Region::Simplex { tau }, NormId::L1) => 2.0 * tau,
        (Region::Simplex { tau }, NormId::L2) => tau * 2.0_f64.sqrt(),
        (Region::Simplex { tau }, NormId::LInf) => *tau,
        (Region::Box { lower, upper }, _) => {
            let widths: Vec<f64> = (0..n).map(|i| upper[i] - lower[i]).collect();
            let w = Vector::new(widths)?;
            norm(p, &w)
        }
        (Region::NuclearBall { tau, .. }, NormId::L2) => 2.0 * tau,
        (Region::SpectralBall { tau, rows, cols }, NormId::L2) => {
            2.0 * tau * (*rows.min(cols) as f64).sqrt()
        }
        (r @ (Region::NuclearBall { .. } | Region::SpectralBall { .. }), p) => {
            return Err(Error::Unsupported(format!(
                "diameter of {} in norm {p} (matrix balls are measured in Frobenius/l2 only)",
                r.kind_name()
            )))
        }
    })
}

/// Reference minimum of `<x, .>` over the region, independent of `lmo`.
///
/// Polytopes are answered exactly: literal vertex enumeration up to
/// `ENUMERATION_LIMIT` coordinates, the coordinate-separable exact minimum
/// beyond that. Balls are answered by the best of `n_samples` seeded feasible
/// points plus the analytic candidate set, so the result upper-bounds the
/// true minimum; `lmo` must do at least as well.
pub fn brute_force_lmo(region: &Region, x: &Vector, n_samples: usize, seed: u64) -> Result<f64> {
    region.check_dim(x.len())?;
    let n = x.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match region {
        Region::L1Ball { tau } => {
            let mut best = f64::INFINITY;
            for i in 0..n {
                best = best.min(tau * x[i]).min(-tau * x[i]);
            }
            Ok(best)
        }
        Region::Simplex { tau } => {
            let mut best = f64::INFINITY;
            for i in 0..n {
                best = best.min(tau * x[i]);
            }
            Ok(best)
        }
        Region::LInfBall { tau } => {
            if n <= ENUMERATION_LIMIT {
                let mut best = f64::INFINITY;
                for mask in 0u64..(1u64 << n) {
                    let mut val = 0.0;
                    for i in 0..n {
                        let s = if mask >> i & 1 == 1 { *tau } else { -tau };
                        val += s * x[i];
                    }
                    best = best.min(val);
                }
                Ok(best)
            } else {
                Ok((0..n).map(|i| (tau * x[i]).min(-tau * x[i])).sum())
            }
        }
        Region::Box { lower, upper } => {
            if n <= ENUMERATION_LIMIT {
                let mut best = f64::INFINITY;
                for mask in 0u64..(1u64 << n) {
                    let mut val = 0.0;
                    for i in 0..n {
                        let c = if mask >> i & 1 == 1 { upper[i] } else { lower[i] };
                        val += c * x[i];
                    }
                    best = best.min(val);
                }
                Ok(best)
            } else {
                Ok((0..n)
                    .map(|i| (lower[i] * x[i]).min(upper[i] * x[i]))
                    .sum())
            }
        }
        Region::L2Ball { tau } => {
            let mut best = -tau * norm(NormId::L2, x);
            for _ in 0..n_samples {
                let s = unit_random(&mut rng, n);
                let val: f64 = s.iter().zip(x.iter()).map(|(a, b)| tau * a * b).sum();
                best = best.min(val).min(-val);
            }
            Ok(best)
        }
        Region::NuclearBall { tau, rows, cols } => {
            let mut best = f64::INFINITY;
            for i in 0..*rows {
                for j in 0..*cols {
                    let val = tau * x[i * cols + j];
                    best = best.min(val).min(-val);
                }
            }
            for _ in 0..n_samples {
                let u = unit_random(&mut rng, *rows);
                let v = unit_random(&mut rng, *cols);
                let val = tau * bilinear(x.as_slice(), *rows, *cols, &u, &v);
                best = best.min(val).min(-val);
            }
            let pair = top_singular_pair(x, *rows, *cols, POWER_TOL, POWER_MAX_ITER)?;
            Ok(best.min(-tau * pair.sigma))
        }
        Region::SpectralBall { tau, rows, cols } => {
            let mut best = f64::INFINITY;
            for i in 0..*rows {
                for j in 0..*cols {
                    let val = tau * x[i * cols + j];
                    best = best.min(val).min(-val);
                }
            }
            for _ in 0..n_samples {
                let q = random_orthonormal(&mut rng, *rows, *cols);
                let val: f64 = q
                    .iter()
                    .zip(x.iter())
                    .map(|(a, b)| tau * a * b)
                    .sum();
                best = best.min(val).min(-val);
            }
            let (sigmas, _, _) = reduced_svd(x, *rows, *cols, POWER_TOL, POWER_MAX_ITER)?;
            Ok(best.min(-tau * sigmas.iter().sum::<f64>()))
        }
    }
}

fn bilinear(g: &[f64], rows: usize, cols: usize, u: &[f64], v: &[f64]) -> f64 {
    let mut out = 0.0;
    for i in 0..rows {
        let row = &g[i * cols..(i + 1) * cols];
        let rv: f64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
        out += u[i] * rv;
    }
    out
}

/// Random matrix with orthonormal columns (rows) when tall (wide), flattened
/// row-major. Its operator norm is exactly one, so `tau` times it is a
/// feasible point of the spectral ball.
fn random_orthonormal(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<f64> {
    let (tall, wide) = (rows.max(cols), rows.min(cols));
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(wide);
    while columns.len() < wide {
        let mut c = unit_random(rng, tall);
        orthogonalize_against(&mut c, &columns);
        let nrm = l2(&c);
        if nrm > 0.5 {
            for a in &mut c {
                *a /= nrm;
            }
            columns.push(c);
        }
    }
    let mut out = vec![0.0; rows * cols];
    if rows >= cols {
        for (j, c) in columns.iter().enumerate() {
            for i in 0..rows {
                out[i * cols + j] = c[i];
            }
        }
    } else {
        for (i, c) in columns.iter().enumerate() {
            out[i * cols..(i + 1) * cols].copy_from_slice(c);
        }
    }
    out
}
