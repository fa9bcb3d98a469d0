//! Configuration-driven front end: TOML configs, scenario runs that write CSV
//! and summary files, and the self-convergence harness.

pub mod config;
pub mod convergence;
pub mod scenario;

pub use config::{parse_config, RunConfig};
pub use convergence::{convergence_study, ConvergenceReport, ConvergenceRow};
pub use scenario::{run_scenario, simulate, ScenarioOutcome, Summary};

use std::path::Path;

use thiserror::Error;

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(Error),
    #[error("existence condition violated, lhs={lhs} (mass {mass})")]
    Infeasible { lhs: f64, mass: f64 },
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Infeasible { .. } => EXIT_INFEASIBLE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}
