use thiserror::Error;

use crate::params::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported type: {0}")]
    UnsupportedType(String),

    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("type mismatch: {0} vs {1}")]
    TypeMismatch(String, String),

    #[error("invalid parameter tuple: {0}")]
    InvalidTuple(ValidationReport),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("search limit exceeded: {0}")]
    Limit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
