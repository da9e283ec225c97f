use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("contraction step {step}: {message}")]
    Contraction { step: usize, message: String },
    #[error("invalid decomposition: {0}")]
    Decomposition(String),
    #[error("precondition ({which}) violated: {detail}")]
    Precondition { which: &'static str, detail: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("resource limit exceeded: {0}")]
    Limit(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
