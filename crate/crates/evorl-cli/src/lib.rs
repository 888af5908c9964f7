//! Reproducibility shell around `evorl-core`: JSON configs, CSV output,
//! run manifests, summary statistics, and the built-in oracle checks.
//!
//! The binary (`evorl`) is a thin wrapper over this library so integration
//! tests can drive the exact code paths the CLI uses.

#![warn(missing_docs)]

pub mod config;
pub mod oracles;
pub mod output;
pub mod summarize;

/// Engine version string recorded in run manifests.
pub const VERSION: &str = concat!("evorl ", env!("CARGO_PKG_VERSION"));

/// Process exit code for configuration problems.
pub const EXIT_CONFIG: i32 = 1;
/// Process exit code for runtime failures (engine or I/O).
pub const EXIT_RUNTIME: i32 = 2;

/// Everything the harness can fail with, split by exit-code class.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The config file is missing, malformed, or fails validation.
    #[error("{path}: {message}")]
    Config {
        /// Config file path as given on the command line.
        path: String,
        /// Field-level description of the problem.
        message: String,
    },

    /// The run itself failed: engine error or I/O error.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// Process exit code this error maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}
