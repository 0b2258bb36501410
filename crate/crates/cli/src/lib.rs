//! Batch front end for the folding library: problem files in,
//! presentations, certificates, fold traces and DOT diagrams out.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

pub mod commands;
pub mod machine;
pub mod problem;

use std::fmt;

/// Command-level errors, mapped to exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad input of any kind (exit code 2).
    Input(String),
    /// A verification check failed (exit code 1).
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
