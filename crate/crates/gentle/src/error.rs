use thiserror::Error;

/// Errors raised by the library. Every variant is a domain error, not a bug.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unsupported characteristic: {0}")]
    Characteristic(String),
    #[error("split failure: {0}")]
    SplitFailure(String),
    #[error("not a complex: {0}")]
    NotComplex(String),
    #[error("complex is not minimal")]
    NotMinimal,
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("inadmissible transformation: {0}")]
    Inadmissible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Short machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::InvalidDatum(_) => "invalid-datum",
            Error::Dimension(_) => "dimension",
            Error::Characteristic(_) => "characteristic",
            Error::SplitFailure(_) => "split-failure",
            Error::NotComplex(_) => "not-complex",
            Error::NotMinimal => "not-minimal",
            Error::InvalidWord(_) => "invalid-word",
            Error::InvalidTriple(_) => "invalid-triple",
            Error::Inadmissible(_) => "inadmissible",
            Error::Unsupported(_) => "unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
