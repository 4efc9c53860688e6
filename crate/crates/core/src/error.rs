use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("qubit count mismatch: expected {expected}, found {found}")]
    QubitMismatch { expected: usize, found: usize },
    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),
    /// A documented precondition (criticality, finite stabilizer, ...) does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no critical representative: {0}")]
    NullCone(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("internal numerical error: {0}")]
    Internal(String),
}
