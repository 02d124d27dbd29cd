//! Crate-wide error type.

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Mismatched or invalid dimensions.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A point (or phase point) violates its manifold constraint.
    #[error("membership error: {0}")]
    Membership(String),

    /// A simplex position lies exactly on the boundary.
    #[error("boundary error: position lies on the simplex boundary")]
    Boundary,

    /// The reflective flow exceeded the per-call reflection budget.
    #[error("reflection limit exceeded after {0} reflections")]
    ReflectionLimit(usize),

    /// Effective sample size is undefined for the series.
    #[error("undefined ESS: {0}")]
    UndefinedEss(String),

    /// A kernel error annotated with the chain step where it occurred.
    #[error("chain step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    /// Malformed text input, with the 1-based offending line.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Invalid or inconsistent experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wrap a kernel error with the step index it occurred at.
    pub fn at_step(self, step: usize) -> Self {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
