use std::path::PathBuf;

use crate::model::{ElemId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed element {elem_id}: {reason}")]
    MalformedElement { elem_id: ElemId, reason: String },

    #[error("degenerate tetrahedron (signed volume {volume:e})")]
    DegenerateTet { volume: f64 },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("unknown element {0}")]
    UnknownElement(ElemId),

    #[error("mesh has no elements")]
    EmptyMesh,

    #[error("connectivity corruption: {0}")]
    ConnectivityCorruption(String),

    #[error("no face of element {elem_id} is crossed by the ray toward the query point")]
    TraversalStuck { elem_id: ElemId },

    #[error("walk from element {start} gave up after {steps} steps")]
    StepLimit { start: ElemId, steps: usize },

    #[error(
        "walk left the domain through a surface face of element {elem_id} after {steps} steps"
    )]
    DomainExit { elem_id: ElemId, steps: usize },

    #[error("point ({}, {}, {}) is not contained in the mesh", .0[0], .0[1], .0[2])]
    NotContained([f64; 3]),

    #[error("mesh failed validation with {count} finding(s); first: {first}")]
    Validation { count: usize, first: String },

    #[error("{}:{line}: {msg}", .path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        msg: String,
    },

    #[error("corrupt archive: {0}")]
    CorruptArchive(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
