use thiserror::Error;

use crate::Rat;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Best bounds known when a search ran out of nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub nodes: usize,
    pub lower: Rat,
    pub upper: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("complex is not orientable")]
    NonOrientable,
    #[error("complex is not a closed pseudo-manifold: {0}")]
    NotClosed(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("automorphism reverses orientation")]
    OrientationReversing,
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("matrix is not in SL2(Z) (det = {0})")]
    NotSl2(String),
    #[error("size limit exceeded: {needed} > {limit}")]
    SizeLimitExceeded { limit: usize, needed: usize },
    #[error("target is not a boundary")]
    Infeasible,
    #[error("node budget of {} exhausted (lower {}, upper {})", .0.nodes, .0.lower, .0.upper.as_ref().map(|u| u.to_string()).unwrap_or_else(|| "none".into()))]
    BudgetExceeded(Box<Budget>),
    #[error("trace {0} is too small (need tr > 2)")]
    TraceTooSmall(String),
    #[error("inadmissible flip: {0}")]
    InadmissibleFlip(String),
    #[error("sequence is not subadditive at ({0}, {1})")]
    NotSubadditive(usize, usize),
    #[error("no filling available: {0}")]
    NoFilling(String),
    #[error("coefficient mode: {0}")]
    CoefficientMode(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code for the command-line surface: 3 for budget exhaustion, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded(_) => 3,
            _ => 2,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonOrientable => "NonOrientable",
            Error::NotClosed(_) => "NotClosed",
            Error::InvalidComplex(_) => "InvalidComplex",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::InvalidAutomorphism(_) => "InvalidAutomorphism",
            Error::OrientationReversing => "OrientationReversing",
            Error::NotUnimodular(_) => "NotUnimodular",
            Error::NotSl2(_) => "NotSL2",
            Error::SizeLimitExceeded { .. } => "SizeLimitExceeded",
            Error::Infeasible => "Infeasible",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::TraceTooSmall(_) => "TraceTooSmall",
            Error::InadmissibleFlip(_) => "InadmissibleFlip",
            Error::NotSubadditive(..) => "NotSubadditive",
            Error::NoFilling(_) => "NoFilling",
            Error::CoefficientMode(_) => "CoefficientMode",
            Error::Parse(_) => "Parse",
        }
    }
}
