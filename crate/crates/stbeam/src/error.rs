use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the CLI, grouped so each category maps to one exit code.
#[derive(Debug, Error)]
pub enum AppError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("TLE: {0}")]
    Tle(String),
    #[error("model: {0}")]
    Model(#[from] stbeam_core::Error),
}

impl AppError {
    pub fn config(msg: impl Into<String>) -> Self {
        AppError::Config(msg.into())
    }

    /// 2 config, 3 I/O, 4 input data, 5 model/runtime.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Io { .. } | AppError::Csv { .. } => 3,
            AppError::Tle(_) => 4,
            AppError::Model(_) => 5,
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
