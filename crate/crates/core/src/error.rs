use thiserror::Error;

/// Errors surfaced by library operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A numeric argument fell outside its admissible domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// An operation received an empty input it cannot work with.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    /// Problem name / dimension combination is not supported.
    #[error("unsupported problem configuration: {name} with dimension {dim}")]
    UnsupportedProblem { name: String, dim: usize },
    /// The evaluation budget ran out. Run loops catch this and stop cleanly.
    #[error("evaluation budget exhausted")]
    BudgetExhausted,
}

pub type Result<T> = std::result::Result<T, Error>;
