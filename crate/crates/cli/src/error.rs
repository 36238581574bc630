use std::path::PathBuf;

use markov_tracking::Error as ModelError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("missing required parameter `{0}`")]
    Missing(&'static str),

    #[error("unknown table `{0}`; run `mtrack table --help` for the list")]
    UnknownTable(String),

    #[error("config file {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Missing(_) | CliError::UnknownTable(_) | CliError::Config { .. } => {
                EXIT_VALIDATION
            }
            CliError::Model(ModelError::InvalidParameter { .. }) => EXIT_VALIDATION,
            CliError::Model(_) => EXIT_INFEASIBLE,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
