use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {msg}")]
    Input { path: PathBuf, msg: String },
    #[error("solver failure after t = {last_valid_time}: {msg}")]
    SolverFailure { last_valid_time: f64, msg: String },
    #[error("{0}")]
    Run(String),
    #[error("i/o on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Input { .. } => ExitCode::from(2),
            CliError::SolverFailure { .. } => ExitCode::from(3),
            CliError::Run(_) | CliError::Io { .. } => ExitCode::from(1),
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

impl From<diskflow::SolverError> for CliError {
    fn from(e: diskflow::SolverError) -> Self {
        match e {
            diskflow::SolverError::BlowUp {
                last_valid_time,
                reason,
            } => CliError::SolverFailure {
                last_valid_time,
                msg: reason,
            },
            diskflow::SolverError::StepSize { cfl, limit, time } => CliError::SolverFailure {
                last_valid_time: time,
                msg: format!("CFL number {cfl:.3e} exceeds {limit}; reduce solver.dt"),
            },
            diskflow::SolverError::Config(m) => CliError::Config(m),
            other => CliError::Run(other.to_string()),
        }
    }
}

impl From<diskflow::StabilityError> for CliError {
    fn from(e: diskflow::StabilityError) -> Self {
        match e {
            diskflow::StabilityError::Solver(s) => s.into(),
            diskflow::StabilityError::Config(m) => CliError::Config(m),
            other => CliError::Run(other.to_string()),
        }
    }
}
