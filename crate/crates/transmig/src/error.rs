use std::path::PathBuf;

use transmig_core::placement::PlacementError;
use transmig_core::sim::SimError;

use crate::generate::GenerateError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {field}: {message}")]
    Invalid { path: String, field: String, message: String },
    #[error("infeasible scenario: {0}")]
    Infeasible(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl Error {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Parse { .. } | Error::Invalid { .. } | Error::Usage(_) => 2,
            Error::Infeasible(_) => 3,
            Error::Budget(_) => 4,
            _ => 1,
        }
    }

    pub fn from_model(e: transmig_core::ModelError) -> Self {
        Error::Infeasible(e.to_string())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

impl From<PlacementError> for Error {
    fn from(e: PlacementError) -> Self {
        match e {
            PlacementError::BudgetExceeded { .. } => Error::Budget(e.to_string()),
            PlacementError::InvalidSeparation(_) | PlacementError::InvalidCount | PlacementError::InvalidGaParams(_) => {
                Error::Usage(e.to_string())
            }
            _ => Error::Infeasible(e.to_string()),
        }
    }
}

impl From<GenerateError> for Error {
    fn from(e: GenerateError) -> Self {
        match e {
            GenerateError::Spec(_) => Error::Usage(e.to_string()),
            _ => Error::Infeasible(e.to_string()),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
