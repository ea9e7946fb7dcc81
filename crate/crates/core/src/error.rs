use thiserror::Error;

use crate::constraints::Witness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("triangle corners are collinear")]
    DegenerateTriangle,
    #[error("point triple is collinear, no affine map exists")]
    CollinearTriple,
    #[error("segment has zero length")]
    ZeroLengthSegment,
    #[error("perturbation failed after {0} halvings")]
    PerturbationFailed(u32),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` repeated inside one triple")]
    RepeatedVertexInTriple(String),
    #[error("vertex `{0}` is not embedded")]
    MissingVertex(String),
    #[error("duplicate vertex `{0}` in universe")]
    DuplicateVertex(String),
    #[error("inconsistent prescriptions: {0}")]
    Inconsistent(Box<Witness>),
    #[error("hypergraph is not {0}-degenerate")]
    NotDegenerate(usize),
    #[error("collinear prescriptions are not supported by the degenerate embedder")]
    CollinearConstraintUnsupported,

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("turn list has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vertex `{vertex}` repeated at consecutive positions {position} and {}", position + 1)]
    ConsecutiveDuplicate { position: usize, vertex: String },
    #[error("unknown direction `{0}` (expected L or R)")]
    UnknownDirection(char),
    #[error("turn at position {position} has a repeated endpoint `{vertex}`")]
    DegenerateTurn { position: usize, vertex: String },
    #[error("walk of length {0} has no turns to reduce")]
    WalkTooShort(usize),
    #[error("generated name `{0}` collides with an existing vertex")]
    NameCollision(String),

    #[error("embedding does not realize the input ({0} violations)")]
    RealizationInvalid(usize),
    #[error("embedding is not a simultaneous embedding ({0} violations)")]
    SimultaneityViolation(usize),
    #[error("soundness violation: {0}")]
    SoundnessViolation(String),
    #[error("placement failed: {0}")]
    PlacementFailure(String),

    #[error("universe of {size} vertices exceeds the grid oracle limit {limit}")]
    UniverseTooLarge { size: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("rejection budget exhausted: {0}")]
    RejectionBudgetExhausted(String),

    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format_version {0}")]
    FormatVersion(u64),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
