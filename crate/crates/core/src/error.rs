use crate::metric::PointId;

/// Errors produced by the solvers, oracles and instance loaders.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("point {id} is out of range for an instance with {count} points")]
    PointOutOfRange { id: PointId, count: usize },

    #[error("node {0} is not in the tree")]
    NodeNotInTree(PointId),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("{0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("infeasible instance: {0}")]
    Infeasible(String),

    /// An internal guarantee of an algorithm failed. This always indicates a bug.
    #[error("algorithm invariant violated: {0}")]
    Invariant(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("degenerate tour: {0}")]
    DegenerateTour(String),

    #[error("instance too large for exhaustive search: {0}")]
    OracleSize(String),

    #[error("invalid generator parameters: {0}")]
    Generator(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
