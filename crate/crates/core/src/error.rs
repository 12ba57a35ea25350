use thiserror::Error;

/// Errors raised by the library.
///
/// `Parse` covers malformed input text; every other variant is a domain
/// error (a well-formed input that violates a precondition).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate identifier `{0}`")]
    DuplicateIdentifier(String),

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("invalid open set: {0}")]
    InvalidOpen(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("invalid nerve: {0}")]
    InvalidNerve(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid descent datum: {0}")]
    InvalidDatum(String),

    #[error("cocycle violation: {0}")]
    CocycleViolation(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("enumeration limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("not a chain of refinements: {0}")]
    NotAChain(String),

    #[error("not trivializable: {0}")]
    NotTrivializable(String),

    #[error("malformed affine term: {0}")]
    MalformedTerm(String),
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
