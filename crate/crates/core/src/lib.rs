//! Exact filling norms and filling-volume bounds on finite combinatorial models.
//!
//! The crate is organised around a handful of layers:
//!
//! * [`complex`]: finite Δ-complexes, generators for model manifolds, prisms and mapping tori.
//! * [`affine`]: affine singular chains on the flat torus, closed under `SL₂(ℤ)`.
//! * [`linalg`]: exact integer linear algebra (Smith normal form, homology).
//! * [`l1opt`]: exact ℓ¹ minimisation by rational simplex and branch-and-bound.
//! * [`torus`]: `SL₂(ℤ)` mapping classes, RL words, flip fillings and torsion certificates.
//! * [`fillvolume`]: certified intervals for filling volumes of mapping classes.
//!
//! No floating point number is used to decide anything; every reported value is an exact
//! rational with a certificate that can be re-checked independently.

pub mod affine;
pub mod chain;
pub mod complex;
pub mod error;
pub mod fillvolume;
pub mod l1opt;
pub mod linalg;
pub mod rational;
pub mod torus;

pub use chain::{Chain, CoeffMode};
pub use error::{Error, Result};
pub use rational::{Int, Rat};

/// Version string embedded in every machine-readable output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
