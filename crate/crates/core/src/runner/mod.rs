//! Batch front-end: TOML run configurations in, deterministic CSV/JSON/SVG
//! artifacts out.
//!
//! Exit-code contract of the `wqed` binary: 0 success, 2 configuration
//! error, 3 compute error, 4 oracle recurrence-guard flag.

mod commands;
pub mod config;
pub mod output;

pub use commands::{export_trajectory, run, WORKERS_ENV};
pub use config::{Command, RunConfig};
pub use output::{render_line_plot, CsvTable, RunManifest};

/// Process exit codes of the batch binary.
pub mod exit_codes {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG_ERROR: i32 = 2;
    pub const COMPUTE_ERROR: i32 = 3;
    pub const ORACLE_GUARD: i32 = 4;
}

#[derive(Debug)]
pub enum RunnerError {
    /// Bad configuration; carries the offending section/field.
    Config { context: String, message: String },
    /// Failure during computation or artifact writing.
    Compute { message: String },
}

impl RunnerError {
    pub fn config(context: &str, message: &str) -> Self {
        Self::Config { context: context.to_string(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => exit_codes::CONFIG_ERROR,
            Self::Compute { .. } => exit_codes::COMPUTE_ERROR,
        }
    }
}

impl std::fmt::Display for RunnerError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config { context, message } => write!(f, "config error at {context}: {message}"),
            Self::Compute { message } => write!(f, "compute error: {message}"),
        }
    }
}

impl std::error::Error for RunnerError {}
