//! `acgd compare`: one problem, several strategies, one summary table.
//!
//! Every strategy gets its own instance build (separate evaluation counters
//! and an identical starting state) and its own thread. A strategy that
//! cannot run (say, short-step without a known curvature bound) becomes an
//! error row; the table still renders and the command succeeds as long as
//! at least one row finished.

use std::time::Instant;

use acgd_core::{solve, SolveStatus, StrategyKind};

use crate::args::RunSpec;
use crate::instance::build_instance;
use crate::output::{render_table, SummaryRow};
use crate::CliError;

use super::{solver_config, write_artifact};

pub fn cmd_compare(spec: &RunSpec, kinds: &[StrategyKind]) -> i32 {
    match compare_inner(spec, kinds) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn compare_inner(spec: &RunSpec, kinds: &[StrategyKind]) -> Result<i32, CliError> {
    // Surface bad problem/flag combinations as usage errors before any row
    // starts; per-row failures after this point are solver errors.
    build_instance(spec)?;

    let started = Instant::now();
    let mut rows: Vec<Result<SummaryRow, String>> = Vec::with_capacity(kinds.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = kinds
            .iter()
            .map(|&kind| {
                let mut row_spec = spec.clone();
                row_spec.strategy = kind;
                scope.spawn(move || row(&row_spec))
            })
            .collect();
        for (kind, handle) in kinds.iter().zip(handles) {
            rows.push(match handle.join() {
                Ok(res) => res,
                Err(_) => Err(format!("{}: worker thread panicked", kind.name())),
            });
        }
    });
    let wall = started.elapsed().as_secs_f64();

    let table = render_table(&rows);
    write_artifact(spec.out.as_deref(), table.as_bytes())?;
    eprintln!("wall-clock: {wall:.3}s");

    let any_ok = rows.iter().any(|r| r.is_ok());
    Ok(if any_ok { 0 } else { 1 })
}

fn row(spec: &RunSpec) -> Result<SummaryRow, String> {
    let name = spec.strategy.name();
    let inst = build_instance(spec).map_err(|e| format!("{name}: {e}"))?;
    let cfg = solver_config(spec, &inst);
    let res = solve(&inst.objective, &cfg, &inst.x0).map_err(|e| format!("{name}: {e}"))?;
    if res.status == SolveStatus::Error {
        let detail = res.error.unwrap_or_else(|| "solver failure".to_string());
        return Err(format!("{name}: {detail}"));
    }
    Ok(SummaryRow {
        strategy: name.to_string(),
        status: res.status,
        iterations: res.trace.len(),
        objective: res.final_objective,
        gap: res.final_gap,
        grad_evals: inst.objective.grad_evals(),
        fn_evals: inst.objective.fn_evals(),
    })
}
