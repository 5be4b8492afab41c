use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {reason}", path.display())]
    Input { path: PathBuf, reason: String },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] wtgep::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("all {0} grid cells failed")]
    GridFailed(usize),
}

impl CliError {
    /// Stable category used in the diagnostic prefix.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Input { .. } => "input",
            CliError::Config(_) => "config",
            CliError::Model(_) => "model",
            CliError::Csv(_) | CliError::Json(_) => "output",
            CliError::GridFailed(_) => "grid",
        }
    }

    /// `wtgep: error[<kind>]: <message>` on a single line.
    pub fn diagnostic(&self) -> String {
        let message = self.to_string().replace(['\n', '\r'], " ");
        format!("wtgep: error[{}]: {message}", self.kind())
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
