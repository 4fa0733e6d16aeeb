use crate::error::{Error, Result};
use crate::lmo::{lmo, Region};
use crate::norm::NormId;
use crate::objective::Objective;
use crate::stepsize::{next_step, StepOutcome, StepState, StepStrategy};
use crate::vector::Vector;

/// Feasibility slack for the starting point and trace assertions.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Directions are `v - x` toward the oracle point; steps cap at 1 so
    /// iterates stay inside the region by convexity.
    Constrained,
    /// Directions are the oracle point of the unit ball itself; steps are
    /// uncapped.
    Unconstrained,
}

impl Mode {
    pub fn t_max(self) -> f64 {
        match self {
            Mode::Constrained => 1.0,
            Mode::Unconstrained => f64::INFINITY,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Constrained => "constrained",
            Mode::Unconstrained => "unconstrained",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "constrained" => Ok(Mode::Constrained),
            "unconstrained" => Ok(Mode::Unconstrained),
            other => Err(format!(
                "unknown mode '{other}' (expected constrained or unconstrained)"
            )),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Full configuration of one solve.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub mode: Mode,
    pub region: Region,
    pub strategy: StepStrategy,
    /// Norm used by the sufficient-decrease model and the Lipschitz
    /// estimate.
    pub backtrack_norm: NormId,
    /// Stop once the termination criterion is at or below this. Zero
    /// disables early stopping short of exact criticality.
    pub tol: f64,
    pub max_iter: usize,
    /// Seeds the synthetic probe at iteration zero.
    pub seed: u64,
    /// Terminate on `f(x) - known_optimum <= tol` instead of the gap;
    /// requires the objective to carry a known optimum.
    pub use_functional_gap: bool,
}

impl SolverConfig {
    pub fn new(mode: Mode, region: Region, strategy: StepStrategy) -> Self {
        Self {
            mode,
            region,
            strategy,
            backtrack_norm: NormId::L2,
            tol: 1e-5,
            max_iter: 3000,
            seed: 0,
            use_functional_gap: false,
        }
    }

    fn validate(&self, obj: &Objective) -> Result<()> {
        self.strategy.validate()?;
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tol must be non-negative, got {}",
                self.tol
            )));
        }
        if self.use_functional_gap && obj.known_optimum().is_none() {
            return Err(Error::InvalidParameter(
                "functional-gap termination needs an objective with a known optimum".to_string(),
            ));
        }
        Ok(())
    }
}

/// One row per completed iteration, recorded before the step is taken: the
/// objective and gap describe the iterate the step departs from.
#[derive(Clone, Debug)]
pub struct TraceRow {
    pub k: usize,
    pub objective: f64,
    pub gap: f64,
    pub t: f64,
    pub l_accepted: f64,
    pub n_backtracks: usize,
    pub gamma: f64,
    pub cumulative_grad_evals: u64,
    pub cumulative_fn_evals: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterReached,
    Error,
}

impl SolveStatus {
    pub fn name(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIterReached => "max-iter-reached",
            SolveStatus::Error => "error",
        }
    }
}

/// Result of a solve. On `Error` status the trace holds everything completed
/// before the failure and `error` carries the diagnostic.
#[derive(Debug)]
pub struct SolverResult {
    pub final_x: Vector,
    /// Objective at `final_x`; NaN when a failure preceded its evaluation.
    pub final_objective: f64,
    /// Termination criterion at `final_x` (gap, or functional gap when so
    /// configured); NaN as above.
    pub final_gap: f64,
    pub status: SolveStatus,
    pub error: Option<String>,
    pub trace: Vec<TraceRow>,
}

/// Direction for the mode: the oracle point itself when unconstrained, the
/// segment toward it when constrained.
pub fn direction(mode: Mode, v: &Vector, x: &Vector) -> Result<Vector> {
    if v.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: v.len(),
        });
    }
    match mode {
        Mode::Unconstrained => Ok(v.clone()),
        Mode::Constrained => v.sub(x),
    }
}

/// Certified progress measure `-<grad, d>`: the conditional-gradient gap in
/// constrained mode, the dual gradient norm of the oracle ball in
/// unconstrained mode. Non-negative whenever `d` came from the oracle.
pub fn gap(grad: &Vector, d: &Vector) -> f64 {
    assert_eq!(grad.len(), d.len(), "gap on mismatched lengths");
    -grad.dot(d)
}

enum IterOutcome {
    /// Criterion at or below tol; terminal values are for the current x.
    Converged { fx: f64, crit: f64 },
    /// Budget exhausted; terminal values as above.
    Budget { fx: f64, crit: f64 },
    /// A step was computed and should be applied.
    Step {
        fx: f64,
        gap_k: f64,
        d: Vector,
        outcome: StepOutcome,
        gamma_used: f64,
    },
}

pub fn solve(obj: &Objective, config: &SolverConfig, x0: &Vector) -> Result<SolverResult> {
    solve_observed(obj, config, x0, |_, _| {})
}

/// `solve` with a per-iterate callback invoked on every `x_k` (including the
/// final point, with its index). Lets tests audit feasibility along the whole
/// trajectory without the solver storing iterates.
pub fn solve_observed(
    obj: &Objective,
    config: &SolverConfig,
    x0: &Vector,
    mut observe: impl FnMut(usize, &Vector),
) -> Result<SolverResult> {
    config.validate(obj)?;
    if x0.len() != obj.dim() {
        return Err(Error::DimensionMismatch {
            expected: obj.dim(),
            actual: x0.len(),
        });
    }
    config.region.check_dim(x0.len())?;
    if config.mode == Mode::Constrained && !config.region.contains(x0, FEASIBILITY_TOL)? {
        return Err(Error::InfeasibleStart {
            detail: format!(
                "starting point violates the {} region beyond {FEASIBILITY_TOL:e}",
                config.region.kind_name()
            ),
        });
    }

    let t_max = config.mode.t_max();
    let f_star = obj.known_optimum().unwrap_or(0.0);
    let fn_base = obj.fn_evals();
    let grad_base = obj.grad_evals();

    let mut x = x0.clone();
    let mut trace: Vec<TraceRow> = Vec::new();
    let mut final_objective = f64::NAN;
    let mut final_gap = f64::NAN;
    let status;
    let mut error: Option<String> = None;

    let mut state = match StepState::init(&config.strategy, obj, &x, config.seed) {
        Ok(s) => s,
        Err(e) => {
            return Ok(SolverResult {
                final_x: x,
                final_objective,
                final_gap,
                status: SolveStatus::Error,
                error: Some(e.to_string()),
                trace,
            })
        }
    };

    let mut k = 0;
    loop {
        observe(k, &x);
        let iteration = (|| -> Result<IterOutcome> {
            let grad = obj.grad(&x)?;
            let v = lmo(&config.region, &grad)?;
            let d = direction(config.mode, &v, &x)?;
            let gap_k = gap(&grad, &d);
            let fx = obj.value(&x)?;
            let crit = if config.use_functional_gap {
                fx - f_star
            } else {
                gap_k
            };
            if crit <= config.tol {
                return Ok(IterOutcome::Converged { fx, crit });
            }
            if k >= config.max_iter {
                return Ok(IterOutcome::Budget { fx, crit });
            }
            let gamma_used = state.gamma;
            let outcome = next_step(
                &config.strategy,
                &mut state,
                obj,
                &x,
                &grad,
                &d,
                fx,
                config.backtrack_norm,
                t_max,
                k,
            )?;
            Ok(IterOutcome::Step {
                fx,
                gap_k,
                d,
                outcome,
                gamma_used,
            })
        })();

        match iteration {
            Ok(IterOutcome::Converged { fx, crit }) => {
                final_objective = fx;
                final_gap = crit;
                status = SolveStatus::Converged;
                break;
            }
            Ok(IterOutcome::Budget { fx, crit }) => {
                final_objective = fx;
                final_gap = crit;
                status = SolveStatus::MaxIterReached;
                break;
            }
            Ok(IterOutcome::Step {
                fx,
                gap_k,
                d,
                outcome,
                gamma_used,
            }) => {
                trace.push(TraceRow {
                    k,
                    objective: fx,
                    gap: gap_k,
                    t: outcome.t,
                    l_accepted: outcome.l_accepted,
                    n_backtracks: outcome.n_backtracks,
                    gamma: gamma_used,
                    cumulative_grad_evals: obj.grad_evals() - grad_base,
                    cumulative_fn_evals: obj.fn_evals() - fn_base,
                });
                match x.add_scaled(&d, outcome.t) {
                    Ok(next) => x = next,
                    Err(e) => {
                        status = SolveStatus::Error;
                        error = Some(format!("iterate update failed: {e}"));
                        break;
                    }
                }
            }
            Err(e) => {
                status = SolveStatus::Error;
                error = Some(e.to_string());
                break;
            }
        }
        k += 1;
    }

    Ok(SolverResult {
        final_x: x,
        final_objective,
        final_gap,
        status,
        error,
        trace,
    })
}
