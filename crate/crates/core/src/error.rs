//! Error type shared by every operation in the workbench.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed structure or an argument outside its domain.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// An enumeration bound was hit before the answer was known.
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    /// A documented precondition failed; the message carries the witness.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A property that should hold was found to fail; the message is the witness.
    #[error("refuted: {0}")]
    Refuted(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}

pub(crate) fn refuted<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Refuted(msg.into()))
}
