use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::vector::Vector;

type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A differentiable objective over dense vectors.
///
/// `value_fn` and `grad_fn` must be pure: the same input always produces the
/// same output. Evaluation counters are the only interior state; they exist so
/// traces can report cost honestly and do not affect results.
///
/// A NaN from either callback aborts the surrounding solve with a diagnostic
/// error instead of propagating. Infinite objective *values* are allowed
/// (backtracking treats them as failed decrease); gradients must be finite.
pub struct Objective {
    dim: usize,
    name: String,
    value_fn: ValueFn,
    grad_fn: GradFn,
    known_lipschitz: Option<f64>,
    known_optimum: Option<f64>,
    fn_evals: AtomicU64,
    grad_evals: AtomicU64,
}

impl Objective {
    pub fn new<F, G>(dim: usize, name: impl Into<String>, value_fn: F, grad_fn: G) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        assert!(dim > 0, "objectives need a positive dimension");
        Self {
            dim,
            name: name.into(),
            value_fn: Arc::new(value_fn),
            grad_fn: Arc::new(grad_fn),
            known_lipschitz: None,
            known_optimum: None,
            fn_evals: AtomicU64::new(0),
            grad_evals: AtomicU64::new(0),
        }
    }

    /// Records a global gradient Lipschitz constant when one is known.
    pub fn with_lipschitz(mut self, l: f64) -> Self {
        assert!(l.is_finite() && l > 0.0, "Lipschitz constant must be positive");
        self.known_lipschitz = Some(l);
        self
    }

    /// Records the optimal objective value when one is known.
    pub fn with_optimum(mut self, f_star: f64) -> Self {
        assert!(f_star.is_finite(), "known optimum must be finite");
        self.known_optimum = Some(f_star);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn known_lipschitz(&self) -> Option<f64> {
        self.known_lipschitz
    }

    pub fn known_optimum(&self) -> Option<f64> {
        self.known_optimum
    }

    /// Evaluates the objective. NaN aborts; +/-infinity passes through.
    pub fn value(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        self.fn_evals.fetch_add(1, Ordering::Relaxed);
        let v = (self.value_fn)(x.as_slice());
        if v.is_nan() {
            return Err(Error::NonFinite {
                context: format!("objective '{}' value", self.name),
            });
        }
        Ok(v)
    }

    /// Evaluates the gradient; every entry must be finite.
    pub fn grad(&self, x: &Vector) -> Result<Vector> {
        self.check_dim(x)?;
        self.grad_evals.fetch_add(1, Ordering::Relaxed);
        let g = (self.grad_fn)(x.as_slice());
        if g.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: g.len(),
            });
        }
        Vector::new(g).map_err(|_| Error::NonFinite {
            context: format!("objective '{}' gradient", self.name),
        })
    }

    pub fn fn_evals(&self) -> u64 {
        self.fn_evals.load(Ordering::Relaxed)
    }

    pub fn grad_evals(&self) -> u64 {
        self.grad_evals.load(Ordering::Relaxed)
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.len(),
            });
        }
        Ok(())
    }
}

impl std::fmt::Debug for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Objective")
            .field("dim", &self.dim)
            .field("name", &self.name)
            .field("known_lipschitz", &self.known_lipschitz)
            .field("known_optimum", &self.known_optimum)
            .finish()
    }
}

/// Central-difference gradient, the reference oracle for `grad_fn`.
///
/// Costs `2 * dim` objective evaluations; intended for tests and diagnostics.
pub fn finite_diff_gradient(obj: &Objective, x: &Vector, h: f64) -> Result<Vector> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    if x.len() != obj.dim() {
        return Err(Error::DimensionMismatch {
            expected: obj.dim(),
            actual: x.len(),
        });
    }
    let mut g = Vec::with_capacity(x.len());
    let mut probe = x.as_slice().to_vec();
    for i in 0..x.len() {
        let xi = probe[i];
        probe[i] = xi + h;
        let fp = obj.value(&Vector::new(probe.clone())?)?;
        probe[i] = xi - h;
        let fm = obj.value(&Vector::new(probe.clone())?)?;
        probe[i] = xi;
        g.push((fp - fm) / (2.0 * h));
    }
    Vector::new(g)
}
