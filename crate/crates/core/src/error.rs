use thiserror::Error;

/// Errors produced by the simulation and estimation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Truncation leakage exceeded the tolerance of the constructor.
    #[error("cutoff {cutoff} too small: truncation leakage {leakage:.3e} exceeds {tolerance:.1e}")]
    CutoffTooSmall {
        cutoff: usize,
        leakage: f64,
        tolerance: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid Gaussian channel: {0}")]
    InvalidChannel(String),

    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl Error {
    /// True for failures caused by numerics (non-convergence, truncation)
    /// rather than by malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::CutoffTooSmall { .. } | Error::NumericalFailure(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
