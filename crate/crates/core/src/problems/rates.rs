//! Problem constants used to evaluate worst-case convergence guarantees on
//! concrete instances. Every field is optional; a bound check uses only the
//! constants its formula needs and reports the rest as unavailable.

use crate::error::Result;
use crate::lmo::{diameter, Region};
use crate::norm::{norm, NormId};
use crate::problems::synthetic::{LassoProblem, QuadraticProblem, SimplexQpProblem};
use crate::vector::Vector;

/// Constants describing one problem instance.
#[derive(Clone, Copy, Debug, Default)]
pub struct RateBound {
    /// Global gradient Lipschitz constant.
    pub l: Option<f64>,
    /// Strong convexity modulus (largest `mu` with `f - (mu/2) ||.||^2`
    /// convex; the smallest Hessian eigenvalue when f is twice
    /// differentiable).
    pub mu: Option<f64>,
    /// Quasar-convexity parameter in (0, 1]; 1 for convex functions.
    pub eta: Option<f64>,
    /// Diameter of the feasible region in the step-size norm.
    pub d: Option<f64>,
    /// Radius bound for the initial level set, floored at 1.
    pub r_level: Option<f64>,
    /// Equivalence constant between the step-size norm and the oracle norm.
    pub zeta: Option<f64>,
    /// Upper bound on the gradient norm over the feasible region.
    pub grad_max: Option<f64>,
    /// Optimal value, or a certified lower bound on it.
    pub f_star: Option<f64>,
}

impl RateBound {
    /// Constrained-mode constant `C = max{beta (L + delta), grad_max, 1} *
    /// max{D, 1}^2`, using the run's backtracking parameters.
    pub fn constrained_c(&self, beta: f64, delta: f64) -> Option<f64> {
        let l = self.l?;
        let d = self.d?;
        let g = self.grad_max?;
        Some((beta * (l + delta)).max(g).max(1.0) * d.max(1.0).powi(2))
    }
}

/// Constants for the separable strongly convex quadratic, all in closed form.
/// `r_level` uses the starting value `h0 = f(x0)` through the curvature
/// floor: `||x - z||^2 <= h0 / c_min` on the initial level set.
pub fn quadratic_rate_bound(q: &QuadraticProblem, h0: f64) -> RateBound {
    RateBound {
        l: Some(2.0 * q.c_max),
        mu: Some(2.0 * q.c_min),
        eta: Some(1.0),
        d: None,
        r_level: Some((h0 / q.c_min).sqrt().max(1.0)),
        zeta: Some(1.0),
        grad_max: None,
        f_star: Some(0.0),
    }
}

/// Constants for the l1-constrained least-squares instance. The gradient
/// bound is the exact maximum of `||2 A^T (A v - b)||_2` over the ball,
/// attained at a vertex because the norm of an affine map is convex.
pub fn lasso_rate_bound(p: &LassoProblem) -> Result<RateBound> {
    let region = &p.region;
    let n = p.a.cols;
    let tau = match region {
        Region::L1Ball { tau } => *tau,
        _ => unreachable!("lasso region is an l1 ball by construction"),
    };
    let mut grad_max: f64 = 0.0;
    for j in 0..n {
        let col = p.a.column(j);
        for sign in [1.0, -1.0] {
            let r: Vec<f64> = col
                .iter()
                .zip(p.b.iter())
                .map(|(c, b)| sign * tau * c - b)
                .collect();
            let g = p.a.t_matvec(&r);
            let g = Vector::new(g.iter().map(|v| 2.0 * v).collect())?;
            grad_max = grad_max.max(norm(NormId::L2, &g));
        }
    }
    Ok(RateBound {
        l: Some(2.0 * p.sigma_max * p.sigma_max),
        mu: None,
        eta: Some(1.0),
        d: Some(diameter(region, NormId::L2, n)?),
        r_level: None,
        zeta: Some(1.0),
        grad_max: Some(grad_max),
        f_star: Some(0.0),
    })
}

/// Constants for the simplex quadratic form. The lower bound on the optimal
/// value is `min_ij Q_ij`: on the simplex the products `x_i x_j` are a
/// convex combination's weights, so `x^T Q x >= min_ij Q_ij`. The gradient
/// bound `2 max_j ||Q e_j||_2` is exact by vertex maximality.
pub fn simplex_qp_rate_bound(p: &SimplexQpProblem) -> Result<RateBound> {
    let n = p.q.rows;
    let mut grad_max: f64 = 0.0;
    let mut q_min = f64::INFINITY;
    for j in 0..n {
        let col = Vector::new(p.q.column(j))?;
        grad_max = grad_max.max(2.0 * norm(NormId::L2, &col));
        q_min = col.iter().fold(q_min, |m, v| m.min(*v));
    }
    Ok(RateBound {
        l: Some(2.0 * p.sigma_max),
        mu: None,
        eta: None,
        d: Some(diameter(&p.region, NormId::L2, n)?),
        r_level: None,
        zeta: Some(1.0),
        grad_max: Some(grad_max),
        f_star: Some(q_min),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::synthetic::{make_lasso, make_quadratic, make_simplex_qp, SyntheticSpec};

    #[test]
    fn constrained_constant_applies_the_floors() {
        let rb = RateBound {
            l: Some(0.1),
            d: Some(0.5),
            grad_max: Some(0.2),
            ..RateBound::default()
        };
        // beta (L + delta) = 0.22 > grad_max, but both are below the floor 1;
        // D < 1 so the squared factor is 1.
        let c = rb.constrained_c(2.0, 0.0).unwrap();
        assert_eq!(c, 1.0);
        let rb2 = RateBound {
            l: Some(3.0),
            d: Some(2.0),
            grad_max: Some(10.0),
            ..RateBound::default()
        };
        // grad_max dominates beta (L + delta) = 6; D^2 = 4.
        assert_eq!(rb2.constrained_c(2.0, 0.0).unwrap(), 40.0);
    }

    #[test]
    fn quadratic_bound_uses_closed_forms() {
        let q = make_quadratic(5, 0.5, 2.0, 1).unwrap();
        let rb = quadratic_rate_bound(&q, 8.0);
        assert_eq!(rb.l, Some(4.0));
        assert_eq!(rb.mu, Some(1.0), "modulus is twice the smallest coefficient");
        assert_eq!(rb.r_level, Some(4.0));
    }

    #[test]
    fn lasso_gradient_bound_dominates_sampled_points() {
        let p = make_lasso(SyntheticSpec {
            m: 15,
            n: 12,
            tau: 2.0,
            seed: 5,
        })
        .unwrap();
        let rb = lasso_rate_bound(&p).unwrap();
        let gm = rb.grad_max.unwrap();
        // Any feasible point's gradient norm must sit below the vertex max.
        for k in 0..12 {
            let mut x = vec![0.0; 12];
            x[k] = if k % 2 == 0 { 1.5 } else { -1.5 };
            let g = p.objective.grad(&Vector::new(x).unwrap()).unwrap();
            let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(gn <= gm + 1e-9, "interior gradient {gn} exceeds bound {gm}");
        }
        assert_eq!(rb.d, Some(4.0), "l1 ball l2 diameter is 2 tau");
    }

    #[test]
    fn simplex_qp_lower_bound_holds_on_samples() {
        let p = make_simplex_qp(8, 3).unwrap();
        let rb = simplex_qp_rate_bound(&p).unwrap();
        let f_lo = rb.f_star.unwrap();
        let gm = rb.grad_max.unwrap();
        // Barycenter and vertices are feasible probes.
        let mut probes = vec![vec![1.0 / 8.0; 8]];
        for k in 0..8 {
            let mut e = vec![0.0; 8];
            e[k] = 1.0;
            probes.push(e);
        }
        for x in probes {
            let x = Vector::new(x).unwrap();
            let v = p.objective.value(&x).unwrap();
            assert!(v >= f_lo - 1e-12, "value {v} below certified bound {f_lo}");
            let g = p.objective.grad(&x).unwrap();
            let gn = g.iter().map(|t| t * t).sum::<f64>().sqrt();
            assert!(gn <= gm + 1e-9);
        }
    }
}
