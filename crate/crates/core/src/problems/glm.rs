use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lmo::Region;
use crate::objective::Objective;
use crate::problems::data::SparseDataset;

/// Numerically stable `log(1 + exp(z))`.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Numerically stable logistic sigmoid.
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn require_binary_labels(data: &SparseDataset, builder: &str) -> Result<()> {
    for (i, l) in data.labels.iter().enumerate() {
        if *l != 1.0 && *l != -1.0 {
            return Err(Error::InvalidParameter(format!(
                "{builder} needs labels in {{-1, +1}}; row {i} has {l}"
            )));
        }
    }
    Ok(())
}

/// Average logistic loss `(1/m) sum_i log(1 + exp(-y_i <a_i, x>))` over an
/// l1 ball. Labels must be -1 or +1. The returned Lipschitz constant is
/// `sigma_max(A)^2 / (4m)`.
pub fn make_logistic(data: Arc<SparseDataset>, tau: f64) -> Result<(Objective, Region)> {
    require_binary_labels(&data, "logistic regression")?;
    let region = Region::l1_ball(tau)?;
    let m = data.rows as f64;
    let sigma = data.to_dense().sigma_max()?;
    let lipschitz = sigma * sigma / (4.0 * m);

    let dv = Arc::clone(&data);
    let value = move |x: &[f64]| -> f64 {
        let scores = dv.row_dots(x);
        scores
            .iter()
            .zip(dv.labels.iter())
            .map(|(s, y)| softplus(-y * s))
            .sum::<f64>()
            / m
    };
    let dg = Arc::clone(&data);
    let grad = move |x: &[f64]| -> Vec<f64> {
        let scores = dg.row_dots(x);
        let coeffs: Vec<f64> = scores
            .iter()
            .zip(dg.labels.iter())
            .map(|(s, y)| -y * sigmoid(-y * s) / m)
            .collect();
        dg.accumulate_rows(&coeffs)
    };
    let objective =
        Objective::new(data.cols, "logistic", value, grad).with_lipschitz(lipschitz);
    Ok((objective, region))
}

/// Average squared sigmoid misfit `(1/m) sum_i (t_i - sigmoid(<a_i, x>))^2`
/// with targets `t_i` obtained by remapping label -1 to 0. Non-convex. With
/// `tau` present the problem is posed over an l1 ball; without it the
/// problem is unconstrained.
pub fn make_sigmoid_ls(
    data: Arc<SparseDataset>,
    tau: Option<f64>,
) -> Result<(Objective, Option<Region>)> {
    for (i, l) in data.labels.iter().enumerate() {
        if *l != 1.0 && *l != -1.0 && *l != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigmoid least squares needs labels in {{-1, 0, +1}}; row {i} has {l}"
            )));
        }
    }
    let region = tau.map(Region::l1_ball).transpose()?;
    let m = data.rows as f64;
    let targets: Arc<Vec<f64>> = Arc::new(
        data.labels
            .iter()
            .map(|l| if *l == -1.0 { 0.0 } else { *l })
            .collect(),
    );

    let (dv, tv) = (Arc::clone(&data), Arc::clone(&targets));
    let value = move |x: &[f64]| -> f64 {
        let scores = dv.row_dots(x);
        scores
            .iter()
            .zip(tv.iter())
            .map(|(s, t)| {
                let p = sigmoid(*s);
                (t - p) * (t - p)
            })
            .sum::<f64>()
            / m
    };
    let (dg, tg) = (Arc::clone(&data), Arc::clone(&targets));
    let grad = move |x: &[f64]| -> Vec<f64> {
        let scores = dg.row_dots(x);
        let coeffs: Vec<f64> = scores
            .iter()
            .zip(tg.iter())
            .map(|(s, t)| {
                let p = sigmoid(*s);
                2.0 * (p - t) * p * (1.0 - p) / m
            })
            .collect();
        dg.accumulate_rows(&coeffs)
    };
    let objective = Objective::new(data.cols, "sigmoid-ls", value, grad);
    Ok((objective, region))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::finite_diff_gradient;
    use crate::vector::Vector;

    fn v(x: &[f64]) -> Vector {
        Vector::from_slice(x).unwrap()
    }

    fn toy_data() -> Arc<SparseDataset> {
        Arc::new(SparseDataset::synthetic_classification(30, 12, 0.3, 17).unwrap())
    }

    #[test]
    fn logistic_at_origin_is_log_two() {
        let (obj, _) = make_logistic(toy_data(), 2.0).unwrap();
        let val = obj.value(&v(&[0.0; 12])).unwrap();
        assert!(
            (val - std::f64::consts::LN_2).abs() < 1e-15,
            "all-zero scores give log 2 per row, got {val}"
        );
    }

    #[test]
    fn logistic_gradient_matches_finite_differences() {
        let (obj, _) = make_logistic(toy_data(), 2.0).unwrap();
        let x = v(&(0..12).map(|i| 0.2 * (i as f64) - 1.0).collect::<Vec<_>>());
        let g = obj.grad(&x).unwrap();
        let fd = finite_diff_gradient(&obj, &x, 1e-6).unwrap();
        for (a, b) in g.iter().zip(fd.iter()) {
            assert!((a - b).abs() < 1e-6, "analytic {a} vs finite-diff {b}");
        }
    }

    #[test]
    fn logistic_survives_extreme_scores() {
        // One feature with a huge weight drives |<a, x>| past 700, where a
        // naive exp overflows. The loss and gradient must stay finite.
        let data = Arc::new(
            SparseDataset::new(2, 1, vec![(0, 0, 1.0), (1, 0, -1.0)], vec![1.0, -1.0]).unwrap(),
        );
        let (obj, _) = make_logistic(data, 1.0).unwrap();
        for x in [800.0, -800.0] {
            let x = v(&[x]);
            let val = obj.value(&x).unwrap();
            assert!(val.is_finite(), "loss overflowed at x = {}", x[0]);
            let g = obj.grad(&x).unwrap();
            assert!(g[0].is_finite());
        }
    }

    #[test]
    fn logistic_rejects_non_binary_labels() {
        let data =
            Arc::new(SparseDataset::new(2, 2, vec![(0, 0, 1.0)], vec![1.0, 0.5]).unwrap());
        assert!(make_logistic(data, 1.0).is_err());
    }

    #[test]
    fn sigmoid_ls_remaps_labels_and_matches_finite_differences() {
        let (obj, region) = make_sigmoid_ls(toy_data(), Some(3.0)).unwrap();
        assert!(region.is_some());
        let x = v(&(0..12).map(|i| 0.15 * (6.0 - i as f64)).collect::<Vec<_>>());
        let g = obj.grad(&x).unwrap();
        let fd = finite_diff_gradient(&obj, &x, 1e-6).unwrap();
        for (a, b) in g.iter().zip(fd.iter()) {
            assert!((a - b).abs() < 1e-6, "analytic {a} vs finite-diff {b}");
        }
    }

    #[test]
    fn sigmoid_ls_perfect_separation_loss_bounds() {
        // Scores at the origin are all zero, so every prediction is 1/2 and
        // every target is 0 or 1: the loss is exactly 1/4.
        let (obj, region) = make_sigmoid_ls(toy_data(), None).unwrap();
        assert!(region.is_none());
        let val = obj.value(&v(&[0.0; 12])).unwrap();
        assert!((val - 0.25).abs() < 1e-15, "got {val}");
    }
}
