use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A model or configuration failed validation.
    #[error("invalid model: {0}")]
    Validation(String),
    /// The caller asked for a mode the operation does not support.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A computation would exceed a practical resource bound.
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    /// A numerical procedure failed to converge or the input misbehaves numerically.
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for failures that are numerical rather than user errors.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_) | Error::Resource(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
