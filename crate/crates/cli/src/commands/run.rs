//! `acgd run`: one problem, one strategy, a trace CSV, and a summary line.
//!
//! The CSV goes to `--out` (stdout when omitted, with the summary moved to
//! stderr so the data stream stays clean). A failing solve still flushes
//! whatever trace rows were completed and exits 1; reaching the iteration
//! budget is a normal outcome, not a failure.

use std::time::Instant;

use acgd_core::{solve, SolveStatus};

use crate::args::RunSpec;
use crate::instance::build_instance;
use crate::output::{g17, write_trace};
use crate::CliError;

use super::{solver_config, write_artifact};

pub fn cmd_run(spec: &RunSpec) -> i32 {
    match run_inner(spec) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn run_inner(spec: &RunSpec) -> Result<i32, CliError> {
    let inst = build_instance(spec)?;
    let cfg = solver_config(spec, &inst);
    let started = Instant::now();
    let outcome = solve(&inst.objective, &cfg, &inst.x0);
    let wall = started.elapsed().as_secs_f64();

    let empty = [];
    let trace = match &outcome {
        Ok(res) => res.trace.as_slice(),
        Err(_) => &empty[..],
    };
    let mut bytes = Vec::new();
    write_trace(&mut bytes, trace).map_err(|e| CliError::Run(format!("trace encode: {e}")))?;
    write_artifact(spec.out.as_deref(), &bytes)?;

    let code = match &outcome {
        Ok(res) => {
            let summary = format!(
                "problem={} strategy={} status={} iterations={} objective={} gap={} \
                 grad_evals={} fn_evals={}",
                spec.problem.name(),
                spec.strategy.name(),
                res.status.name(),
                res.trace.len(),
                g17(res.final_objective),
                g17(res.final_gap),
                inst.objective.grad_evals(),
                inst.objective.fn_evals()
            );
            if spec.out.is_some() {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            if let Some(detail) = &res.error {
                eprintln!("error: {detail}");
            }
            match res.status {
                SolveStatus::Converged | SolveStatus::MaxIterReached => 0,
                SolveStatus::Error => 1,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    eprintln!("wall-clock: {wall:.3}s");
    Ok(code)
}
