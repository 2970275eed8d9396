//! Exact integer linear algebra: dense matrices, Smith normal form, homology.

mod homology;
mod matrix;
mod sl2;
mod snf;

pub use homology::{homology, homology_all, HomologyGroup};
pub use matrix::IntMatrix;
pub use sl2::{torus_bundle_h1, Mat2};
pub use snf::{snf, solve_integer, SmithDecomposition};
pub(crate) use snf::solve_with as snf_solve;
