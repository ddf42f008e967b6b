// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::PathBuf;

/// Errors produced anywhere in the toolkit.
///
/// Each variant maps onto one of the CLI exit codes through [`Error::exit_code`].
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid input data, configuration, or precondition violation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Hypothesis and dataset disagree about which feature columns exist.
    #[error("configuration error: {0}")]
    Config(String),

    /// The true-risk functional needs the true means, which the dataset lacks.
    #[error("true risk unavailable: dataset has no eta column")]
    TrueRiskUnavailable,

    /// A CSV or JSON input could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A factorization or solver failed in a way that could not be repaired.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Self::InvalidInput(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 validation, 3 I/O, 4 internal numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::InvalidInput(_)
            | Self::Config(_)
            | Self::TrueRiskUnavailable
            | Self::Parse { .. } => 2,
            Self::Io { .. } => 3,
            Self::Numerical(_) => 4,
        }
    }

    /// Short machine-readable tag for the error object the CLI prints.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::InvalidInput(_) => "invalid_input",
            Self::Config(_) => "config",
            Self::TrueRiskUnavailable => "true_risk_unavailable",
            Self::Parse { .. } => "parse",
            Self::Io { .. } => "io",
            Self::Numerical(_) => "numerical",
        }
    }
}
