use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input (length mismatch, non-signature, bad parameter).
    #[error("invalid argument: {0}")]
    Argument(String),
    /// Input is well-formed but the formula is undefined there (pole, zero denominator).
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured enumeration or truncation bound was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// The requested combination is not implemented (two-sided infinite convolutions).
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
