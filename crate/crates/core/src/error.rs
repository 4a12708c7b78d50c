use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid array: {0}")]
    InvalidArray(String),
    #[error("invalid interaction: {0}")]
    InvalidInteraction(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("array is not an exact CA_X(v(v+1);2,k,v): {0}")]
    NotExact(String),
    #[error("remainder is not an orthogonal array: {0}")]
    NotOrthogonal(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
