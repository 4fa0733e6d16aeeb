//! End-to-end solves on the benchmark builders at small scale: convergence,
//! monotone descent, iterate feasibility, and run-to-run determinism.

use acgd_core::problems::{
    make_lasso, make_matrix_balancing, make_quadratic, make_simplex_qp, SyntheticSpec,
};
use acgd_core::{
    solve, solve_observed, Mode, Region, SolveStatus, SolverConfig, StepStrategy, Vector,
};

fn small_lasso() -> acgd_core::problems::LassoProblem {
    make_lasso(SyntheticSpec {
        m: 60,
        n: 150,
        tau: 8.0,
        seed: 42,
    })
    .unwrap()
}

fn assert_monotone(trace: &[acgd_core::TraceRow], final_objective: f64, label: &str) {
    for w in trace.windows(2) {
        assert!(
            w[1].objective <= w[0].objective + 1e-12,
            "{label}: objective rose from {} to {} at iteration {}",
            w[0].objective,
            w[1].objective,
            w[1].k
        );
    }
    if let Some(last) = trace.last() {
        assert!(
            final_objective <= last.objective + 1e-12,
            "{label}: final objective {final_objective} above last trace row {}",
            last.objective
        );
    }
}

#[test]
fn adaptive_strategies_converge_on_lasso() {
    for strategy in [
        StepStrategy::adaptive_constant(),
        StepStrategy::adaptive_adjustable(),
        StepStrategy::pure_backtracking(),
    ] {
        let p = small_lasso();
        let label = strategy.kind.name().to_string();
        let mut config = SolverConfig::new(Mode::Constrained, p.region.clone(), strategy);
        config.use_functional_gap = true;
        let x0 = Vector::new(vec![0.0; 150]).unwrap();
        let result = solve(&p.objective, &config, &x0).unwrap();
        assert_eq!(
            result.status,
            SolveStatus::Converged,
            "{label} did not converge: final gap {}",
            result.final_gap
        );
        assert!(result.final_gap <= 1e-5);
        assert_monotone(&result.trace, result.final_objective, &label);
    }
}

#[test]
fn unconstrained_descent_reaches_quadratic_optimum() {
    let q = make_quadratic(20, 0.5, 6.0, 9).unwrap();
    let mut config = SolverConfig::new(
        Mode::Unconstrained,
        Region::l2_ball(1.0).unwrap(),
        StepStrategy::adaptive_constant(),
    );
    config.use_functional_gap = true;
    config.tol = 1e-8;
    let x0 = Vector::new(vec![2.0; 20]).unwrap();
    let result = solve(&q.objective, &config, &x0).unwrap();
    assert_eq!(result.status, SolveStatus::Converged);
    assert!(result.final_objective <= 1e-8);
    assert_monotone(&result.trace, result.final_objective, "unconstrained quadratic");
}

#[test]
fn simplex_iterates_stay_feasible() {
    let p = make_simplex_qp(25, 4).unwrap();
    let config = SolverConfig::new(
        Mode::Constrained,
        p.region.clone(),
        StepStrategy::adaptive_adjustable(),
    );
    let x0 = Vector::new(vec![1.0 / 25.0; 25]).unwrap();
    let region = p.region.clone();
    let mut checked = 0usize;
    let result = solve_observed(&p.objective, &config, &x0, |k, x| {
        assert!(
            region.contains(x, 1e-9).unwrap(),
            "iterate {k} left the simplex"
        );
        checked += 1;
    })
    .unwrap();
    assert!(checked > 1, "observer should see every iterate");
    assert!(result.error.is_none());
    assert_monotone(&result.trace, result.final_objective, "simplex qp");
    for row in &result.trace {
        assert!(
            (0.0..=1.0).contains(&row.t),
            "constrained step size {} outside [0, 1]",
            row.t
        );
    }
}

#[test]
fn box_constrained_balancing_descends() {
    // Constant vectors are optimal for the symmetrized weights, so start from
    // a spread-out point to force real work.
    let (obj, region) = make_matrix_balancing(30, 1.0, 10.0, 5.0, 12).unwrap();
    let config = SolverConfig::new(
        Mode::Constrained,
        region.clone(),
        StepStrategy::pure_backtracking(),
    );
    let x0 = Vector::new((0..30).map(|i| 1.0 + 9.0 * i as f64 / 29.0).collect()).unwrap();
    let result = solve_observed(&obj, &config, &x0, |k, x| {
        assert!(region.contains(x, 1e-9).unwrap(), "iterate {k} left the box");
    })
    .unwrap();
    assert!(result.error.is_none());
    assert_monotone(&result.trace, result.final_objective, "matrix balancing");
    assert!(
        !result.trace.is_empty(),
        "the box problem should need at least one step"
    );
    let optimum = obj.known_optimum().expect("builder records the optimal value");
    assert!(
        result.final_objective >= optimum - 1e-9,
        "objective {} fell below the optimal value {optimum}",
        result.final_objective
    );
}

#[test]
fn repeated_runs_are_bitwise_identical() {
    let run = || {
        let p = small_lasso();
        let mut config = SolverConfig::new(
            Mode::Constrained,
            p.region.clone(),
            StepStrategy::adaptive_adjustable(),
        );
        config.seed = 123;
        config.use_functional_gap = true;
        let x0 = Vector::new(vec![0.0; 150]).unwrap();
        solve(&p.objective, &config, &x0).unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.trace.len(), b.trace.len());
    for (ra, rb) in a.trace.iter().zip(b.trace.iter()) {
        assert_eq!(ra.objective.to_bits(), rb.objective.to_bits());
        assert_eq!(ra.gap.to_bits(), rb.gap.to_bits());
        assert_eq!(ra.t.to_bits(), rb.t.to_bits());
        assert_eq!(ra.l_accepted.to_bits(), rb.l_accepted.to_bits());
        assert_eq!(ra.gamma.to_bits(), rb.gamma.to_bits());
        assert_eq!(ra.n_backtracks, rb.n_backtracks);
        assert_eq!(ra.cumulative_fn_evals, rb.cumulative_fn_evals);
        assert_eq!(ra.cumulative_grad_evals, rb.cumulative_grad_evals);
    }
    assert_eq!(a.final_objective.to_bits(), b.final_objective.to_bits());
    assert_eq!(a.final_x.as_slice(), b.final_x.as_slice());
}

#[test]
fn open_loop_steps_follow_the_schedule() {
    let p = small_lasso();
    let config = SolverConfig::new(
        Mode::Constrained,
        p.region.clone(),
        StepStrategy::open_loop(),
    );
    let x0 = Vector::new(vec![0.0; 150]).unwrap();
    let mut config = config;
    config.max_iter = 50;
    let result = solve(&p.objective, &config, &x0).unwrap();
    for row in &result.trace {
        let expect = 2.0 / (row.k as f64 + 2.0);
        assert_eq!(row.t, expect, "open-loop step at k = {}", row.k);
    }
}
