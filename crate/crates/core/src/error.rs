use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QpaError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("size limit exceeded: {what} needs dimension {required}, limit is {limit}")]
    SizeLimit {
        what: String,
        required: u128,
        limit: u128,
    },
    #[error("degenerate principal eigenvalue (gap {gap:e})")]
    Degenerate { gap: f64 },
    #[error("integer overflow while computing {0}")]
    Overflow(String),
    #[error("unknown register '{0}'")]
    UnknownRegister(String),
    #[error("not a density matrix: {0}")]
    NotDensity(String),
}

pub type Result<T> = std::result::Result<T, QpaError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(QpaError::InvalidInput(msg.into()))
}
