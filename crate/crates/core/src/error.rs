use thiserror::Error;

/// Errors raised when an input violates the contract of an operation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("matrix has eigenvalue {eigenvalue:.3e} below the positivity tolerance")]
    NegativeEigenvalue { eigenvalue: f64 },

    #[error("invalid Bell spectrum: {0}")]
    BadSpectrum(String),

    #[error("branch phase {0} is not one of the model phases 0 or pi")]
    UnsupportedPhase(f64),

    #[error("dimensionless time must be finite and non-negative, got {0}")]
    NegativeTime(f64),

    #[error("time grid must be strictly ascending and start at 0")]
    BadGrid,

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
