use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the planning pipeline.
#[derive(Debug, Error)]
pub enum PlanError {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed mesh file: {0}")]
    MalformedFile(String),

    #[error("mesh has no triangles after cleanup")]
    EmptyMesh,

    #[error("invalid camera: {0}")]
    InvalidCamera(String),

    #[error("overlap out of range: {0}")]
    OverlapOutOfRange(String),

    #[error("plane z = {level} does not cross the mesh")]
    EmptySlice { level: f64 },

    #[error("closed contour is degenerate (collinear), no outward side")]
    DegenerateContour,

    #[error("no viewpoints were generated at any slice level")]
    NoViewpoints,

    #[error("need at least 2 viewpoints, got {0}")]
    TooFewViewpoints(usize),

    #[error("{count} viewpoints exceed the exhaustive-search limit of {limit}")]
    TooManyViewpoints { count: usize, limit: usize },

    #[error("order is not a permutation of 0..{0}")]
    NotAPermutation(usize),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
}

impl PlanError {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = PlanError> = std::result::Result<T, E>;
