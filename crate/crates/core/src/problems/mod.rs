//! Benchmark problem builders: synthetic random instances, classic smooth
//! test functions, sparse generalized linear models, a robust matrix
//! completion task, and the constants needed to evaluate convergence
//! guarantees on each instance.

pub mod classic;
pub mod data;
pub mod glm;
pub mod linalg;
pub mod rates;
pub mod synthetic;

pub use classic::{make_levy, make_rosenbrock, make_sum_of_squares, make_zakharov};
pub use data::{load_libsvm, SparseDataset};
pub use glm::{make_logistic, make_sigmoid_ls};
pub use linalg::{cholesky_solve, DenseMat};
pub use rates::{lasso_rate_bound, quadratic_rate_bound, simplex_qp_rate_bound, RateBound};
pub use synthetic::{
    make_huber_completion, make_lasso, make_least_squares, make_matrix_balancing, make_quadratic,
    make_simplex_qp, HuberCompletionProblem, LassoProblem, QuadraticProblem, SimplexQpProblem,
    SyntheticSpec,
};
