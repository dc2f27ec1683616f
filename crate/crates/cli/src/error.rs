use thiserror::Error;

/// Failures that end a run, mapped onto exit codes; rejected inputs from
/// the library count as usage errors.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error(transparent)]
    Numerical(#[from] qds3::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(qds3::Error::InvalidParameter(_) | qds3::Error::CapExceeded { .. }) => 2,
            CliError::Numerical(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}
