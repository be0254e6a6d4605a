use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum PtscError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("pair is not structurally controllable")]
    NotStructurallyControllable,

    #[error("operation requires a single-input system, got m = {0}")]
    NotSingleInput(usize),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("degenerate sample persisted after {0} retries")]
    DegenerateSample(usize),
}

pub type Result<T> = std::result::Result<T, PtscError>;
