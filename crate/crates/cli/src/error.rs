use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

/// Process exit codes.
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    InvalidComparison(String),

    #[error(transparent)]
    Design(#[from] nlfm_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        use nlfm_core::Error as E;
        match self {
            CliError::Config(_) => "config",
            CliError::Usage(_) => "usage",
            CliError::InvalidComparison(_) => "invalid_comparison",
            CliError::Design(e) => match e {
                E::Aliasing { .. } => "aliasing",
                E::InvalidParameter(_) => "invalid_parameter",
                E::Underdetermined { .. } | E::InsufficientData { .. } => "underdetermined",
                E::NonFinite(_) => "non_finite",
                _ => "numerical",
            },
            CliError::Io { .. } => "io",
            CliError::ThreadPool(_) => "runtime",
        }
    }

    pub fn exit_code(&self) -> i32 {
        use nlfm_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::InvalidComparison(_) => {
                EXIT_CONFIG
            }
            CliError::Design(
                E::Aliasing { .. }
                | E::InvalidParameter(_)
                | E::Underdetermined { .. }
                | E::InsufficientData { .. },
            ) => EXIT_CONFIG,
            CliError::Design(_) | CliError::ThreadPool(_) => EXIT_NUMERICAL,
            CliError::Io { .. } => EXIT_IO,
        }
    }

    /// Single-line JSON object for standard error.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Record<'a> {
            error: &'a str,
            message: String,
            exit_code: i32,
        }
        serde_json::to_string(&Record {
            error: self.kind(),
            message: self.to_string(),
            exit_code: self.exit_code(),
        })
        .expect("error record serializes")
    }
}
