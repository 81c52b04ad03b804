use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("{0}")]
    Numeric(#[from] fockcomm::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("numerical diagnostic: {0}")]
    Diagnostic(String),
}

impl CliError {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config { key: key.into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } | Self::Numeric(_) | Self::Io(_) | Self::Csv(_) => 1,
            Self::Validation(_) => 2,
            Self::Diagnostic(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
