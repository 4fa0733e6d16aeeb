use thiserror::Error;

/// Errors surfaced by solver, oracle, and problem-construction routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("vectors must have at least one entry")]
    EmptyVector,

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },

    #[error("power iteration did not converge within {max_iter} iterations")]
    PowerIterationDiverged { max_iter: usize },

    #[error("descent direction has zero norm; the caller should have terminated on the gap")]
    DegenerateDirection,

    #[error(
        "backtracking exceeded {max_rounds} rounds (last L = {last_l:.6e}); \
         the gradient is likely inconsistent with the objective"
    )]
    BacktrackingExceeded { max_rounds: usize, last_l: f64 },

    #[error("short-step requires a known Lipschitz constant (none configured or stored on the objective)")]
    MissingLipschitz,

    #[error("infeasible starting point: {detail}")]
    InfeasibleStart { detail: String },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
