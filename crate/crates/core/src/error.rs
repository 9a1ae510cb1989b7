use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("not a similitude")]
    NotSimilitude,
    #[error("closure exceeded bound of {0} elements")]
    BoundExceeded(usize),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("Hensel criterion fails: {0}")]
    Hensel(String),
    #[error("not of required shape: {0}")]
    Shape(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
