use std::path::Path;

use citenet::analysis::AnalysisError;
use citenet::clustering::ClusterError;
use citenet::evaluation::EvalError;
use citenet::generate::GenerateError;
use citenet::graph::GraphError;
use thiserror::Error;

/// Failure of a command, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad command line: exit 1.
    #[error("{0}")]
    Usage(String),
    /// Unreadable, malformed or inconsistent input: exit 2.
    #[error("{0}")]
    Input(String),
    /// The algorithm declined to run on this input: exit 3.
    #[error("{0}")]
    Refused(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Refused(_) => 3,
        }
    }

    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GenerateError> for CliError {
    fn from(e: GenerateError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ClusterError> for CliError {
    fn from(e: ClusterError) -> Self {
        match e {
            ClusterError::SizeCapExceeded { .. } | ClusterError::NotConverged { .. } => {
                CliError::Refused(e.to_string())
            }
            ClusterError::InvalidResolution(_)
            | ClusterError::InvalidConfig(_)
            | ClusterError::InvalidClusterCount { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}
