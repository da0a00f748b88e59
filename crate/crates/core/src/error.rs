use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while projecting, inverting or classifying data.
#[derive(Debug, Error)]
pub enum Error {
    /// The readings are not the image of any real point-camera configuration.
    #[error("data is not realizable: {0}")]
    Infeasible(String),
    /// The readings sit on the image of the singular set (collinear points,
    /// coincident cameras, vanishing closed-form denominators).
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    /// The linear part of a pair system cannot be eliminated (`af - be = 0`).
    #[error("singular elimination in pair system (af - be = {0:e})")]
    SingularElimination(f64),
    #[error("no real solution: {0}")]
    NoRealSolution(String),
    #[error("lines are parallel; camera normals are coplanar")]
    ParallelLines,
    #[error("in-plane line coordinates are linearly dependent")]
    DependentLines,
    #[error("pole on the unit circle (|A| = 1 or |B| = 1)")]
    PoleOnCircle,
    #[error("zero denominator: {0}")]
    ZeroDenominator(&'static str),
    #[error("no finite point count for d = {d}, m = {m}")]
    NoFiniteAnswer { d: u32, m: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
