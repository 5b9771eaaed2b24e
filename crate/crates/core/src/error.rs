use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("state not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("dimension {dim} exceeds the configured maximum {max}")]
    DimTooLarge { dim: u128, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("wire conflict: {0}")]
    WireConflict(String),
    #[error("group of order {order} exceeds the enumeration cap {max}")]
    GroupTooLarge { order: u128, max: u128 },
    #[error("inconsistent oracle: {0}")]
    InconsistentOracle(String),
    #[error("incommensurable periods")]
    Incommensurable,
    #[error("algorithm failed: {0}")]
    AlgorithmFailure(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
