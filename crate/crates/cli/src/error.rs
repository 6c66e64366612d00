use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{stage}: validation failed: {message}")]
    Validation {
        stage: &'static str,
        message: String,
    },
    #[error("{stage}: refused: {message}")]
    Infeasible {
        stage: &'static str,
        message: String,
    },
    #[error("{stage}: malformed input: {message}")]
    Malformed {
        stage: &'static str,
        message: String,
    },
    #[error("{stage}: missing artifact {}", path.display())]
    Missing { stage: &'static str, path: PathBuf },
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation { .. } => 1,
            CliError::Infeasible { .. } => 2,
            CliError::Malformed { .. } | CliError::Missing { .. } | CliError::Io { .. } => 3,
        }
    }

    pub fn validation(stage: &'static str, message: impl ToString) -> Self {
        CliError::Validation {
            stage,
            message: message.to_string(),
        }
    }

    pub fn malformed(stage: &'static str, message: impl ToString) -> Self {
        CliError::Malformed {
            stage,
            message: message.to_string(),
        }
    }
}
