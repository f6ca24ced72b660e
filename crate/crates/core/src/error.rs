use thiserror::Error;

use crate::su2::HalfInt;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid quantum number: {0}")]
    InvalidQuantumNumber(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("dense dimension {dimension} exceeds limit {limit}")]
    DenseLimitExceeded { dimension: u128, limit: usize },

    #[error("operators belong to different ensembles")]
    EnsembleMismatch,

    #[error("operators use different representations")]
    RepresentationMismatch,

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("label {m} is not a valid magnetization for total spin {total}")]
    InvalidOutcome { m: HalfInt, total: HalfInt },

    #[error("{count} joint assignments exceed the limit {limit}")]
    AssignmentLimitExceeded { count: u128, limit: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("inconsistent marginals: {0}")]
    InconsistentMarginals(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidQuantumNumber(_) => "invalid_quantum_number",
            Error::Domain(_) => "domain",
            Error::DenseLimitExceeded { .. } => "dense_limit_exceeded",
            Error::EnsembleMismatch => "ensemble_mismatch",
            Error::RepresentationMismatch => "representation_mismatch",
            Error::InvalidDirection(_) => "invalid_direction",
            Error::InvalidOutcome { .. } => "invalid_outcome",
            Error::AssignmentLimitExceeded { .. } => "assignment_limit_exceeded",
            Error::InvalidScenario(_) => "invalid_scenario",
            Error::InconsistentMarginals(_) => "inconsistent_marginals",
            Error::Parse(_) => "parse",
        }
    }

    /// Caused by the caller's input rather than by a size limit or an
    /// internal inconsistency.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::DenseLimitExceeded { .. }
                | Error::AssignmentLimitExceeded { .. }
                | Error::EnsembleMismatch
                | Error::RepresentationMismatch
        )
    }
}
