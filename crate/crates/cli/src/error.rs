use std::process::ExitCode;

use gegenchain::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Io(_) => ExitCode::from(2),
            CliError::Numerical(_) => ExitCode::from(3),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonPositiveParam(_) | Error::Domain { .. } | Error::DimensionMismatch(_) => {
                CliError::Usage(e.to_string())
            }
            Error::NonFinite(_)
            | Error::NoConvergence { .. }
            | Error::DegenerateSpectrum(..)
            | Error::NoCrossing { .. }
            | Error::NonMonotoneInertia { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("malformed input: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}
