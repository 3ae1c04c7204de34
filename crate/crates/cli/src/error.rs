use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error(transparent)]
    Core(#[from] bjnear::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}
