use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HookError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degree mismatch: expected {expected}, got {actual}")]
    DegreeMismatch { expected: usize, actual: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("tableau {0} is not semi-standard")]
    NotSemistandard(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("element {0} is not in the basis of the weight space")]
    NotInBasis(String),
}

pub type Result<T> = std::result::Result<T, HookError>;

pub(crate) fn invalid(msg: impl Into<String>) -> HookError {
    HookError::InvalidParameter(msg.into())
}
