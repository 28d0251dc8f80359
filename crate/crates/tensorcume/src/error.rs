use thiserror::Error;

/// Errors surfaced by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero rational function")]
    DivisionByZero,
    #[error("zero has no leading term")]
    ZeroLeadingTerm,
    #[error("evaluation at N = {0} hits a pole of the denominator")]
    PoleEvaluation(i64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("missing trace-table entry for `{0}`")]
    MissingTableEntry(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported distribution sum: {0}")]
    UnsupportedSum(String),
    #[error("profile regime mismatch: expected {expected}, got {found}")]
    RegimeMismatch { expected: String, found: String },
    #[error("missing profile entry for `{0}`")]
    MissingProfileEntry(String),
    #[error("invalid partition bounds: {0}")]
    InvalidBounds(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numeric tensor has non-real trace invariant; symbolic engine requires real values")]
    NonRealInvariant,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
