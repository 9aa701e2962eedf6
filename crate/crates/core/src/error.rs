use thiserror::Error;

/// Errors raised by the simulation and estimation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A value lies outside the range of a function (e.g. inverse past V(S)).
    #[error("range error: {0}")]
    Range(String),
    /// Malformed input data (weights, breakpoints, configuration records).
    #[error("validation error: {0}")]
    Validation(String),
    /// A precondition on the inputs' structure is not met.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An object was used before it reached the required state.
    #[error("state error: {0}")]
    State(String),
    /// A bounded resource (recursion depth, matrix size) was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// A numerical routine failed (non-convergence, factorization failure).
    #[error("numerical error: {0}")]
    Numerical(String),
    /// The sampling grid is too coarse for the requested scale.
    #[error("resolution error: {0}")]
    Resolution(String),
    /// A least-squares fit could not be formed.
    #[error("fit error: {0}")]
    Fit(String),
    /// The path carries no information at the requested scale.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Invariant violation inside the library.
    #[error("internal error: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("usage error: {0}")]
    Usage(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
