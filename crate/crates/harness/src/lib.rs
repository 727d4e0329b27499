//! Experiment runner for the revealed-lp learners: run configuration, the
//! per-setting episode drivers, bound checks and file formats.

pub mod bounds;
pub mod config;
pub mod io;
pub mod runs;

pub use bounds::BoundCheck;
pub use config::{Kind, LearnerKind, RunConfig};
pub use runs::{run, Report};

use revealed_lp_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] Error),

    /// A learner or environment failed on a given (one-based) day.
    #[error("day {day}: {source}")]
    Day { day: usize, source: Error },
}

impl HarnessError {
    /// Process exit code: 3 for contract violations, 64 for configuration
    /// errors, 1 otherwise. Bound failures (2) are decided by the caller.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 64,
            HarnessError::Core(e) | HarnessError::Day { source: e, .. } => match e {
                Error::Config(_) => 64,
                Error::Contract(_) | Error::Construction { .. } | Error::Invariant { .. } | Error::Structural(_) => 3,
                _ => 1,
            },
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
