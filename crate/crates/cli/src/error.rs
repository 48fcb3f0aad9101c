use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config file or parameter values.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Numerical(#[from] faraday::Error),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),

    #[error("cannot write output: {0}")]
    Csv(#[from] csv::Error),

    #[error("cannot write output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}
