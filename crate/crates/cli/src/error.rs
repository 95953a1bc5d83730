use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or settings: exit status 2.
    #[error("{0}")]
    Usage(String),
    /// Input that does not pass validation: exit status 1.
    #[error("{0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Prefixes the message with the file it concerns.
    pub fn invalid_in(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Invalid(format!("{}: {err}", path.display()))
    }
}

impl From<metonymy::pipeline::PipelineError> for CliError {
    fn from(e: metonymy::pipeline::PipelineError) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<metonymy::eval::EvalError> for CliError {
    fn from(e: metonymy::eval::EvalError) -> Self {
        CliError::Invalid(e.to_string())
    }
}
