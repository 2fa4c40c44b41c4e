use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("validation error: {0}")]
    Validation(String),
    /// Malformed text input.
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },
    /// The computation would exceed a desk-scale limit.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// The operation is not implemented for this input class.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An internal consistency check failed.
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
