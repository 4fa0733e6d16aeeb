//! Subcommand implementations.

pub mod compare;
pub mod run;
pub mod verify;

use std::io::Write;
use std::path::Path;

use acgd_core::{SolverConfig, StepStrategy};

use crate::args::RunSpec;
use crate::instance::Instance;
use crate::CliError;

/// Strategy with the spec's tuning overrides applied (values validated at
/// resolution time).
pub(crate) fn step_strategy(spec: &RunSpec) -> StepStrategy {
    let mut strategy = StepStrategy::new(spec.strategy);
    if let Some(g) = spec.gamma {
        strategy.gamma0 = g;
    }
    if let Some(b) = spec.beta {
        strategy.beta = b;
    }
    if let Some(d) = spec.delta {
        strategy.delta = d;
    }
    if let Some(r) = spec.r {
        strategy.period = r;
    }
    strategy
}

pub(crate) fn solver_config(spec: &RunSpec, inst: &Instance) -> SolverConfig {
    let mut cfg = SolverConfig::new(inst.mode, inst.region.clone(), step_strategy(spec));
    cfg.tol = spec.tol;
    cfg.max_iter = spec.max_iter;
    cfg.seed = spec.seed;
    cfg.use_functional_gap = inst.functional_gap;
    cfg
}

/// Write a finished artifact to `--out` or stdout.
pub(crate) fn write_artifact(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Run(format!("stdout: {e}")))
        }
    }
}
