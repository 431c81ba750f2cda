//! Library side of the `anfsat` command: file formats and command bodies.

use thiserror::Error;

pub mod commands;
pub mod document;

/// Process exit codes.
pub mod exit {
    pub const SAT: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const REFUSED: i32 = 2;
    pub const NOT_EQUIVALENT: i32 = 3;
    pub const UNSAT: i32 = 20;
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input or invalid arguments.
    #[error("{0}")]
    Input(String),
    /// Well-formed request that exceeds a safety limit.
    #[error("{0}")]
    Refused(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => exit::USAGE,
            CliError::Refused(_) => exit::REFUSED,
        }
    }
}
