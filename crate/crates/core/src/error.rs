use thiserror::Error;

/// Errors produced by the solver pipeline and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("{method} system is numerically singular (condition estimate {condition:.3e})")]
    SolverFailure { method: String, condition: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
