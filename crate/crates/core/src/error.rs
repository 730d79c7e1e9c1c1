use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elevation mismatch: {0} vs {1}")]
    ElevationMismatch(usize, usize),
    #[error("field shape mismatch: ({0},{1}) vs ({2},{3})")]
    ShapeMismatch(u64, u8, u64, u8),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("index {0} is not strictly inside the oracle window")]
    WindowUnsafe(String),
    #[error("quotient model too large: {0} points (limit {1})")]
    ModelTooLarge(u128, u128),
    #[error("neighbourhood identifier mismatch: {0}")]
    IdentifierMismatch(String),
    #[error("operation unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
