//! Projection-free first-order optimization with adaptive step sizes.
//!
//! The solver minimizes a differentiable function either over a convex
//! region (conditional-gradient steps toward a linear minimization oracle)
//! or without constraints (normalized steepest descent in the geometry of a
//! unit ball). Step lengths come from a local Lipschitz estimate, scaled
//! down by a tunable factor and repaired by backtracking when the scaled
//! guess is too optimistic; classical short-step, open-loop, and pure
//! backtracking rules are included for comparison.
//!
//! Layout:
//! - [`vector`], [`norm`], [`objective`]: dense vectors, the l1/l2/l-inf
//!   norm family, and counted objective evaluation.
//! - [`lmo`]: feasible regions, their closed-form linear minimization
//!   oracles, and the supporting singular-value routines.
//! - [`stepsize`]: step-size strategies and the backtracking ladder.
//! - [`solver`]: the iteration loop, trace, and termination logic.
//! - [`problems`]: benchmark objective builders, dataset ingestion, and
//!   convergence-rate constants.

pub mod error;
pub mod lmo;
pub mod norm;
pub mod objective;
pub mod problems;
pub mod solver;
pub mod stepsize;
pub mod vector;

pub use error::{Error, Result};
pub use lmo::{
    brute_force_lmo, diameter, lmo, reduced_svd, top_singular_pair, Region, SingularPair,
    SvdFactors,
};
pub use norm::{dual_norm, norm, NormId};
pub use objective::{finite_diff_gradient, Objective};
pub use solver::{
    direction, gap, solve, solve_observed, Mode, SolveStatus, SolverConfig, SolverResult, TraceRow,
};
pub use stepsize::{
    backtrack, candidate_step, estimate_local_lipschitz, next_step, open_loop_step, short_step,
    sufficient_decrease, update_gamma, StepOutcome, StepState, StepStrategy, StrategyKind,
};
pub use vector::Vector;
