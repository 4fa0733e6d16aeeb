use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use acgd_bench::{bench_lasso, bench_quadratic};
use acgd_core::{
    solve, Mode, Region, SolveStatus, SolverConfig, StepStrategy, StrategyKind, Vector,
};

const STRATEGIES: [StrategyKind; 5] = [
    StrategyKind::AdaptiveConstant,
    StrategyKind::AdaptiveAdjustable,
    StrategyKind::PureBacktracking,
    StrategyKind::ShortStep,
    StrategyKind::OpenLoop,
];

/// Fixed iteration budget with tol 0 so every sample performs identical work
/// regardless of how fast the strategy happens to converge.
fn fixed_budget(mode: Mode, region: Region, kind: StrategyKind, iters: usize) -> SolverConfig {
    let mut cfg = SolverConfig::new(mode, region, StepStrategy::new(kind));
    cfg.tol = 0.0;
    cfg.max_iter = iters;
    cfg
}

fn bench_constrained_lasso(c: &mut Criterion) {
    let p = bench_lasso();
    let x0 = Vector::zeros(p.objective.dim());
    let mut group = c.benchmark_group("solve-lasso-40x80");
    for kind in STRATEGIES {
        let cfg = fixed_budget(Mode::Constrained, p.region.clone(), kind, 50);
        group.bench_with_input(BenchmarkId::new(kind.name(), 50), &cfg, |b, cfg| {
            b.iter(|| {
                let res = solve(&p.objective, cfg, black_box(&x0)).unwrap();
                assert_ne!(res.status, SolveStatus::Error);
                res.final_objective
            });
        });
    }
    group.finish();
}

fn bench_unconstrained_quadratic(c: &mut Criterion) {
    let q = bench_quadratic(200);
    let x0 = Vector::new(q.center.iter().map(|z| z + 1.0).collect()).unwrap();
    let mut group = c.benchmark_group("solve-quadratic-200");
    for kind in STRATEGIES {
        let cfg = fixed_budget(
            Mode::Unconstrained,
            Region::l2_ball(1.0).unwrap(),
            kind,
            50,
        );
        group.bench_with_input(BenchmarkId::new(kind.name(), 50), &cfg, |b, cfg| {
            b.iter(|| {
                let res = solve(&q.objective, cfg, black_box(&x0)).unwrap();
                assert_ne!(res.status, SolveStatus::Error);
                res.final_objective
            });
        });
    }
    group.finish();
}

criterion_group!(benches, bench_constrained_lasso, bench_unconstrained_quadratic);
criterion_main!(benches);
