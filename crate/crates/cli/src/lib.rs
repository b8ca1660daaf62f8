//! Driver for the lattice crates. Every subcommand computes through one of
//! the library modules, writes its numeric artifacts (CSV tables, JSON-line
//! summaries) into the output directory, and appends a manifest line that
//! pins the subcommand, the full parameter set, the master seed, the code
//! version and a digest of every output file. Identical parameters and seed
//! reproduce the numeric artifacts byte for byte.

pub mod cmd;
pub mod manifest;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Rejected before any work started.
    #[error("config: {0}")]
    Config(String),
    /// A module or the filesystem failed mid-run.
    #[error("{0}")]
    Runtime(String),
    /// A verification ran to completion and its residual exceeded tolerance.
    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    /// Process exit code contract: 2 config, 3 runtime, 4 failed check.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::Check(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn config_error(flag: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("--{flag}: {msg}"))
}

pub(crate) fn module_error(module: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Runtime(format!("{module}: {err}"))
}

pub(crate) fn io_error(what: &str, err: std::io::Error) -> CliError {
    CliError::Runtime(format!("{what}: {err}"))
}
