use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input or a broken type invariant.
    #[error("validation error: {0}")]
    Validation(String),
    /// Input exceeds an enumeration limit.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// An operation was called outside its domain (e.g. reduction of a
    /// strategy that does not saturate the bound).
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A tolerance check inside a computation failed.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
