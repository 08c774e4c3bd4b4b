use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A floating point result left its admissible range by more than the
    /// roundoff guard, which indicates inconsistent inputs rather than noise.
    #[error("numeric inconsistency: {0}")]
    NumericInconsistency(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unreachable: {0}")]
    Unreachable(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
