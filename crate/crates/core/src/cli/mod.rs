//! Library side of the `tetraform` command line: config loading, the three
//! subcommands, and the artifacts they write. The binary only parses flags.

mod manifest;
mod run;
mod verify;

pub use manifest::{config_hash, git_blob_sha256, summarize, RotationSummary, RunManifest, RunSummary};
pub use run::{
    cmd_simulate, cmd_sweep, load_config, parse_config, worker_threads, SweepFailure, SweepSummary, THREADS_ENV,
};
pub use verify::{cmd_verify, run_checks, Selector, VerifyEntry, VerifyReport};

use std::fmt;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const BAD_CONFIG: i32 = 1;
    pub const NON_FINITE: i32 = 2;
    pub const VERIFY_FAILED: i32 = 3;
    /// Output directory or file could not be written.
    pub const IO: i32 = 4;
}

/// An error carrying the exit code the binary should return.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub(crate) fn io(path: &std::path::Path, e: impl fmt::Display) -> Self {
        Self::new(exit::IO, format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        let code = match e {
            crate::Error::NonFinite { .. } => exit::NON_FINITE,
            crate::Error::Config(_)
            | crate::Error::Topology(_)
            | crate::Error::Gain(_)
            | crate::Error::NotUnit { .. }
            | crate::Error::State(_) => exit::BAD_CONFIG,
            _ => exit::NON_FINITE,
        };
        Self::new(code, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
