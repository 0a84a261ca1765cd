use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] rveawg_core::Error),
    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("CSV error at {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("malformed file {path}: {what}")]
    Parse { path: PathBuf, what: String },
}

impl CliError {
    /// 1 for configuration problems, 2 for everything that fails at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        CliError::Csv {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
