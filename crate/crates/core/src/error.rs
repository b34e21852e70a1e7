use thiserror::Error;

/// Errors produced by state operations, network evaluation and optimization.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter was outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Operand dimensions are inconsistent.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A state failed a physicality requirement (Hermiticity, uncertainty,
    /// positive definiteness).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A network or chain description is malformed (unknown mode label,
    /// bad schema, unresolved override, ...).
    #[error("config error: {0}")]
    Config(String),

    /// An optimization problem is malformed (e.g. no free phases).
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    /// The optimizer would exceed its evaluation budget.
    #[error("evaluation budget exceeded: {needed} evaluations needed, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
