//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("cell alignment violation: {0}")]
    Misaligned(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid rational: {0}")]
    InvalidRational(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("unknown check id {0:?}")]
    UnknownCheck(String),

    #[error("bad parameters: {0}")]
    BadParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
