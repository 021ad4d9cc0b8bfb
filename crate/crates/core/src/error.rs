use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the processing chain.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation (non-positive
    /// frequency, empty port set, percentile outside (0, 1], ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Inputs that are individually valid but do not fit together
    /// (grid mismatch, vector length mismatch, ...).
    #[error("contract error: {0}")]
    Contract(String),

    /// Physically impossible geometry (source on the scan plane,
    /// far point coinciding with a sample point).
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("{}:{line}: {message}", path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<input>".into()))]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: None,
            line,
            message: msg.into(),
        }
    }

    /// Attach a file path to a parse error that was raised without one.
    pub(crate) fn with_path(self, path: impl Into<PathBuf>) -> Self {
        match self {
            Error::Parse {
                path: None,
                line,
                message,
            } => Error::Parse {
                path: Some(path.into()),
                line,
                message,
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
