use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("scalars from different fields were combined")]
    FieldMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arity mismatch: operation has arity {expected}, got {found} arguments")]
    ArityMismatch { expected: usize, found: usize },
    #[error("argument {slot} does not belong to the operation's source basis")]
    BasisMismatch { slot: usize },
    #[error("degree cap exceeded: {0}")]
    CapExceeded(String),
    #[error("element is not a cycle")]
    NotACycle,
    #[error("cycle has a nonzero homology class")]
    NonzeroClass,
    #[error("input is not reduced: generator `{0}` has degree 0")]
    NotReduced(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("model is unsuitable for this command; missing: {0}")]
    Unsuitable(String),
    #[error("Massey product undefined: {0}")]
    MasseyUndefined(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 3,
            Error::Parse { .. } | Error::UnknownName(_) | Error::Unsuitable(_) => 1,
            _ => 2,
        }
    }
}
