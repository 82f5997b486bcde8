use thiserror::Error;

/// Errors raised by the library. Validation errors describe bad input;
/// numerical errors describe a computation that ran but did not succeed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("infinite norm: {0}")]
    InfiniteNorm(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Process exit code: 1 for validation-type errors, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
