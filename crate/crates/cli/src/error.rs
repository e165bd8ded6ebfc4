use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Invalid(String),
    #[error("non-stationarity detected")]
    Detected,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Detected => 3,
        }
    }
}

impl From<tsdiag_core::Error> for CliError {
    fn from(e: tsdiag_core::Error) -> Self {
        match e {
            tsdiag_core::Error::FileWriteError { .. } => CliError::Io(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}
