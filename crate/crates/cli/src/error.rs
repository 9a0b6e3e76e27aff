use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the command-line frontend. Each maps to a short,
/// stable kind used as the prefix of the single error line.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{field}: {reason}")]
    Config { field: String, reason: String },
    #[error("{path}: line {line}: {reason}")]
    Parse { path: String, line: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] autler_townes::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "config",
            CliError::Parse { .. } => "parse",
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Model(autler_townes::Error::Input(_)) => "input",
            CliError::Model(autler_townes::Error::Domain(_)) => "domain",
            CliError::Model(autler_townes::Error::Numerical { .. }) => "numerical",
        }
    }

    /// `error: <kind>: <message>` on one line, with numerical diagnostics.
    pub fn line(&self) -> String {
        let mut msg = self.to_string();
        if let CliError::Model(autler_townes::Error::Numerical { best, residual, .. }) = self {
            msg.push_str(&format!(" (best {best:?}, residual {residual})"));
        }
        format!("error: {}: {}", self.kind(), msg.replace(['\n', '\r'], " "))
    }

    pub(crate) fn config(field: &str, reason: impl Into<String>) -> Self {
        CliError::Config { field: field.to_string(), reason: reason.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
