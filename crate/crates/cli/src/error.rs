use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot render report: {0}")]
    Output(String),
    #[error(transparent)]
    Core(#[from] starcorr::Error),
}

impl CliError {
    /// 2 for bad input or invariant breaches, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(starcorr::Error::Numeric(_)) => 3,
            CliError::Output(_) => 1,
            _ => 2,
        }
    }
}
