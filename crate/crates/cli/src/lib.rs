//! Experiment harness behind the `isoqubits` command line: deterministic
//! seeding, CSV/JSON artifact writing, the experiment implementations, and
//! the acceptance check suite.

pub mod checks;
pub mod config;
pub mod experiments;
pub mod output;
pub mod seeding;

use std::fmt;

/// Errors surfaced by the harness, mapped to process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid or incomplete configuration; exit code 2.
    Config(String),
    /// An acceptance check failed; exit code 3.
    CheckFailed(String),
    /// Everything else (I/O and the like); exit code 1.
    Other(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::CheckFailed(msg) => write!(f, "check failed: {msg}"),
            CliError::Other(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::CheckFailed(_) => 3,
            CliError::Other(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(format!("io error: {e}"))
    }
}

macro_rules! config_from {
    ($($ty:ty),+) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Config(e.to_string())
            }
        }
    )+};
}

config_from!(
    isoqubits::qubit::QubitError,
    isoqubits::locc::LoccError,
    isoqubits::entropy::EntropyError,
    isoqubits::codes::CodeError,
    isoqubits::hiding::HidingError,
    isoqubits::otm::OtmError
);
