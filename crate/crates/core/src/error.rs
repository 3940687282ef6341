use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("cannot parse `{input}`: {reason}")]
    Polynomial { input: String, reason: String },
    #[error("map is not well defined: {0}")]
    IllDefined(String),
    #[error("complex is not termwise free: {0}")]
    NotFree(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
