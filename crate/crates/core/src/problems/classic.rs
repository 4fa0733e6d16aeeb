//! Classic smooth test functions with analytic gradients. All four attain a
//! global minimum value of zero, which runs use to report functional gaps.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::objective::Objective;

fn require_dim(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return Err(Error::InvalidParameter(format!(
            "{what} needs dimension at least {min}, got {n}"
        )));
    }
    Ok(())
}

/// Chained banana-valley function; minimum 0 at the all-ones point.
pub fn make_rosenbrock(n: usize) -> Result<Objective> {
    require_dim(n, 2, "rosenbrock")?;
    let value = move |x: &[f64]| -> f64 {
        (0..n - 1)
            .map(|i| {
                let a = x[i + 1] - x[i] * x[i];
                let b = x[i] - 1.0;
                100.0 * a * a + b * b
            })
            .sum()
    };
    let grad = move |x: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0; n];
        for i in 0..n - 1 {
            let a = x[i + 1] - x[i] * x[i];
            g[i] += -400.0 * x[i] * a + 2.0 * (x[i] - 1.0);
            g[i + 1] += 200.0 * a;
        }
        g
    };
    Ok(Objective::new(n, "rosenbrock", value, grad).with_optimum(0.0))
}

/// Multimodal sine-modulated bowl; minimum 0 at the all-ones point.
pub fn make_levy(n: usize) -> Result<Objective> {
    require_dim(n, 1, "levy")?;
    let w = move |x: &[f64], i: usize| 1.0 + (x[i] - 1.0) / 4.0;
    let value = move |x: &[f64]| -> f64 {
        let w0 = w(x, 0);
        let mut s = (PI * w0).sin().powi(2);
        for i in 0..n - 1 {
            let wi = w(x, i);
            let wn = w(x, i + 1);
            s += (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wn).sin().powi(2));
        }
        let wl = w(x, n - 1);
        s += (wl - 1.0).powi(2) * (1.0 + (2.0 * PI * wl).sin().powi(2));
        s
    };
    let grad = move |x: &[f64]| -> Vec<f64> {
        // Accumulate d/dw, then apply dw/dx = 1/4 once at the end.
        let mut dw = vec![0.0; n];
        let w0 = w(x, 0);
        dw[0] += PI * (2.0 * PI * w0).sin();
        for i in 0..n - 1 {
            let wi = w(x, i);
            let wn = w(x, i + 1);
            dw[i] += 2.0 * (wi - 1.0) * (1.0 + 10.0 * (PI * wn).sin().powi(2));
            dw[i + 1] += (wi - 1.0).powi(2) * 10.0 * PI * (2.0 * PI * wn).sin();
        }
        let wl = w(x, n - 1);
        dw[n - 1] += 2.0 * (wl - 1.0) * (1.0 + (2.0 * PI * wl).sin().powi(2))
            + (wl - 1.0).powi(2) * 2.0 * PI * (4.0 * PI * wl).sin();
        dw.iter_mut().for_each(|v| *v *= 0.25);
        dw
    };
    Ok(Objective::new(n, "levy", value, grad).with_optimum(0.0))
}

/// Plate-shaped polynomial with a weighted-sum coupling term; minimum 0 at
/// the origin.
pub fn make_zakharov(n: usize) -> Result<Objective> {
    require_dim(n, 1, "zakharov")?;
    let weighted_sum =
        move |x: &[f64]| -> f64 { x.iter().enumerate().map(|(i, v)| 0.5 * (i + 1) as f64 * v).sum() };
    let value = move |x: &[f64]| -> f64 {
        let q: f64 = x.iter().map(|v| v * v).sum();
        let s = weighted_sum(x);
        q + s * s + s * s * s * s
    };
    let grad = move |x: &[f64]| -> Vec<f64> {
        let s = weighted_sum(x);
        let outer = 2.0 * s + 4.0 * s * s * s;
        x.iter()
            .enumerate()
            .map(|(i, v)| 2.0 * v + outer * 0.5 * (i + 1) as f64)
            .collect()
    };
    Ok(Objective::new(n, "zakharov", value, grad).with_optimum(0.0))
}

/// Sum of squared residuals built on running prefix sums,
/// `r_0 = x_0 - 3` and `r_k = (x_0 - 3) - 2 (x_0 + ... + x_k)^2` for k >= 1;
/// minimum 0.
pub fn make_sum_of_squares(n: usize) -> Result<Objective> {
    require_dim(n, 1, "sum-of-squares")?;
    let residuals = move |x: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let mut prefix = vec![0.0; n];
        let mut acc = 0.0;
        for (i, v) in x.iter().enumerate() {
            acc += v;
            prefix[i] = acc;
        }
        let head = x[0] - 3.0;
        let mut r = vec![0.0; n];
        r[0] = head;
        for k in 1..n {
            r[k] = head - 2.0 * prefix[k] * prefix[k];
        }
        (r, prefix)
    };
    let rv = residuals;
    let value = move |x: &[f64]| -> f64 {
        let (r, _) = rv(x);
        r.iter().map(|v| v * v).sum()
    };
    let grad = move |x: &[f64]| -> Vec<f64> {
        let (r, prefix) = residuals(x);
        // d r_k / d x_j = [j == 0] - 4 prefix_k [j <= k] (k >= 1); suffix sums
        // make the gradient a single backward sweep.
        let mut g = vec![0.0; n];
        let mut suffix = 0.0;
        for j in (0..n).rev() {
            if j >= 1 {
                suffix += r[j] * prefix[j];
                g[j] = -8.0 * suffix;
            } else {
                let total_r: f64 = r.iter().sum();
                g[0] = 2.0 * total_r - 8.0 * suffix;
            }
        }
        g
    };
    Ok(Objective::new(n, "sum-of-squares", value, grad).with_optimum(0.0))
}
