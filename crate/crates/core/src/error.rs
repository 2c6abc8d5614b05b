use thiserror::Error;

pub type Result<T> = std::result::Result<T, HopfError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HopfError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Declared invariants disagree with `(a, b)`.
    #[error("consistency error: {0}")]
    Consistency(String),
    /// A point lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// The operation requires a different case tag (A / B1 / B2).
    #[error("case error: {0}")]
    Case(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("evaluation error: {0}")]
    Evaluation(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("fiber undefined: {0}")]
    FiberUndefined(String),
}

impl HopfError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        HopfError::InvalidInput(msg.into())
    }
}
