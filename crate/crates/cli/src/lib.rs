//! Case files, certificate files, run reports and the `bordcert` command
//! line on top of [`bordcert_core`].

use std::path::Path;

pub mod caseio;
pub mod certfile;
pub mod commands;
pub mod report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bordcert_core::Error),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("at `{path}`: {message}")]
    CaseSyntax { path: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown case `{0}` (try `bordcert cases list`)")]
    UnknownCase(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn invalid(path: &str, message: impl Into<String>) -> Self {
        CliError::Invalid { path: path.to_string(), message: message.into() }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}
