use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Matrix or vector dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The requested problem has no feasible solution.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Instance exceeds the guard for exhaustive enumeration.
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    /// A scenario violates a structural invariant.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// An experiment configuration violates a structural invariant.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A result failed a post-hoc invariant validation.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
