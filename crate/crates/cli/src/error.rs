use std::path::PathBuf;

use ipp_core::PlanError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("{context}: {source}")]
    Plan {
        context: String,
        #[source]
        source: PlanError,
    },

    #[error("writing {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const IO: i32 = 2;
    pub const PIPELINE: i32 = 3;
}

impl CliError {
    pub(crate) fn plan(context: impl Into<String>, source: PlanError) -> Self {
        Self::Plan {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn output(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Output {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => exit::VALIDATION,
            Self::Output { .. } => exit::IO,
            Self::Plan { source, .. } => match source {
                PlanError::InvalidCamera(_) | PlanError::OverlapOutOfRange(_) | PlanError::InvalidParameter { .. } => {
                    exit::VALIDATION
                }
                PlanError::FileNotFound(_) | PlanError::Io { .. } | PlanError::MalformedFile(_) => exit::IO,
                _ => exit::PIPELINE,
            },
        }
    }

    /// The underlying planner error, if any.
    pub fn plan_error(&self) -> Option<&PlanError> {
        match self {
            Self::Plan { source, .. } => Some(source),
            _ => None,
        }
    }
}
