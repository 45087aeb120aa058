use thiserror::Error;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status when a computation fails.
pub const EXIT_COMPUTE: i32 = 1;
/// Exit status for malformed invocations or input files.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Compute(#[from] cqsl_core::Error),
    /// Unreadable or malformed input.
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Usage(String),
    #[error("unknown verification suite '{0}'")]
    UnknownSuite(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) | CliError::Write { .. } => EXIT_COMPUTE,
            CliError::Input(_) | CliError::Usage(_) | CliError::UnknownSuite(_) => EXIT_USAGE,
        }
    }
}
