use alloc::string::String;

/// Errors raised by geometry, solvers, learners and environments.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    Input(String),

    /// The polytope is unbounded, empty or violates a structural assumption.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A precondition of an operation does not hold, e.g. a short questionable
    /// interval that contains no precision-grid point.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A learner reached a state its analysis rules out. Carries a rendering of
    /// the state for debugging.
    #[error("invariant violation: {message}")]
    Invariant { message: String, state: String },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// An environment could not honour its contract, e.g. no tie-free day.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A constructed polytope does not reproduce a recorded transcript.
    #[error("construction error on day {day}: {message}")]
    Construction { day: usize, message: String },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
