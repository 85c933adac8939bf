use thiserror::Error;

/// Errors raised by the numerical core.
///
/// Blow-up and step collapse are *outcomes* of a simulation and never show up
/// here; this type only covers invalid inputs and unusable data.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unresolved: {0}")]
    Unresolved(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed field file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
