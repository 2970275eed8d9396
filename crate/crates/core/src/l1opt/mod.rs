//! Exact ℓ¹ minimisation over chain complexes.
//!
//! Real filling norms come from an exact rational simplex with a dual certificate, integral
//! ones from branch-and-bound on top of it. Homology-class problems minimise over
//! `z + ∂c` by adding unweighted columns for `c`.

mod fill;
mod ilp;
mod io;
mod problem;
pub mod simplex;

pub use fill::{
    fill, fill_ilp, fill_lp, min_cycle_in_class, ubc_probe, weightless_min_support, FillProblem,
    FillSolution, UbcReport, UbcSample,
};
pub use ilp::{solve_ilp, IlpConfig, IlpResult, DEFAULT_NODE_LIMIT};
pub use io::{ProblemJson, SolutionJson};
pub use problem::{L1Problem, Objective};
