//! Batch driver: `nhp solve`, `nhp sweep` and `nhp verify` over a JSON run config.

pub mod commands;
pub mod config;

use std::fmt;

pub use config::RunConfig;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Verification failures and other runtime errors.
    pub const FAILURE: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const PARTIAL_SWEEP: i32 = 3;
    pub const DEGENERATE: i32 = 4;
}

/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn config(error: impl Into<anyhow::Error>) -> Self {
        CliError { code: exit::CONFIG, error: error.into() }
    }

    pub fn new(code: i32, error: impl Into<anyhow::Error>) -> Self {
        CliError { code, error: error.into() }
    }

    /// Classifies a solver error: invalid input is a config error, loss of
    /// uniqueness is a degeneracy, everything else a plain failure.
    pub fn solve(e: nhp_core::SolveError) -> Self {
        use nhp_core::SolveError::*;
        let code = match &e {
            InvalidIndex(_) | InvalidScheme(_) | AtomBudget { .. } => exit::CONFIG,
            Degenerate { .. } | DegreeMismatch { .. } => exit::DEGENERATE,
            _ => exit::FAILURE,
        };
        CliError::new(code, e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub type CliResult<T> = Result<T, CliError>;
