use thiserror::Error;

/// Errors mapped to process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config or input files (exit 2).
    #[error("{0}")]
    Invalid(String),
    /// The experiment ran but missed its threshold (exit 3).
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 3,
            _ => 2,
        }
    }
}
