use thiserror::Error;

/// Errors shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed text input; `offset` is a byte offset into the input.
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    /// Input outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured work limit was reached before an answer was found.
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            msg: msg.into(),
        }
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
