//! Exact integer and rational linear algebra.
//!
//! All pivoting is deterministic (first/smallest eligible index), so every
//! function here returns byte-identical results across runs and platforms.

mod lp;
mod matrix;
mod simplex;
mod snf;
mod solve;

pub use lp::{lp_strict_feasible, FarkasRefutation, LinearForm, LpProblem, StrictFeasibility};
pub use simplex::{maximize, Constraint, Sense, SimplexOutcome};
pub use matrix::{IntMatrix, MatrixError, RatMatrix};
pub use snf::{snf, SnfDecomposition};
pub use solve::{
    det_exact_int, det_exact_rat, kernel_basis, rank_rat, solve_independent_columns, solve_unique,
};
