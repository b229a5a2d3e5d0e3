use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("relation `{name}` expects {expected} arguments, got {found}")]
    ArityMismatch { name: String, expected: usize, found: usize },

    #[error("element {element} outside universe of size {size}")]
    ElementOutOfRange { element: usize, size: usize },

    #[error("relation `{0}` declared more than once")]
    DuplicateRelation(String),

    #[error("invalid relation name `{0}`")]
    InvalidRelationName(String),

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("tuple length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("tuple has repeated entries: {0:?}")]
    RepeatedEntries(Vec<usize>),

    #[error("tuples overlap: {0}")]
    Overlap(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search space too large: {0}")]
    GuardExceeded(String),

    #[error("time guard of {0:?} exceeded")]
    TimeGuard(std::time::Duration),

    #[error("malformed formula: {0}")]
    Formula(String),

    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
