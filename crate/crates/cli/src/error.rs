use thiserror::Error;

/// Failures of a CLI run, each tied to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("infeasible scale: {0}")]
    Scale(String),
    #[error("selftest failed: {0}")]
    Selftest(String),
    #[error("{0}")]
    Core(shiftlab::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Scale(_) => 3,
            CliError::Selftest(_) => 4,
            CliError::Core(e) => match e {
                shiftlab::Error::ScaleLimit { .. } | shiftlab::Error::InsufficientOrder { .. } => 3,
                shiftlab::Error::InvalidArgument(_)
                | shiftlab::Error::Divergent(_)
                | shiftlab::Error::ModeMismatch { .. }
                | shiftlab::Error::OddDimension(_)
                | shiftlab::Error::Unsupported(_) => 2,
                _ => 1,
            },
            CliError::Io(_) | CliError::Output(_) => 1,
        }
    }
}

impl From<shiftlab::Error> for CliError {
    fn from(e: shiftlab::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
