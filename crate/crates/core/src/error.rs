use thiserror::Error;

#[derive(Debug, Error)]
pub enum GscError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("unknown edge {0:?} -- {1:?}")]
    UnknownEdge(String, String),

    #[error("bad letter {0:?}")]
    BadLetter(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("graph is not connected ({0} components)")]
    Disconnected(usize),

    #[error("graph {name:?} is not a valid labelled graph: {violations}")]
    Invalid { name: String, violations: String },

    #[error("image of {letter} is not inverse-consistent")]
    InverseMismatch { letter: String },

    #[error("presentation is not C'({lambda}): {reason}")]
    NotSmallCancellation { lambda: String, reason: String },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("ball of radius {radius} truncated at {elements} elements")]
    BallTruncated { radius: usize, elements: usize },

    #[error("well-definedness failure: {0}")]
    WellDefinedness(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl GscError {
    /// True for resource exhaustion, which callers report separately from
    /// invalid input.
    pub fn is_budget(&self) -> bool {
        matches!(self, GscError::Budget(_) | GscError::BallTruncated { .. })
    }
}

pub type Result<T, E = GscError> = std::result::Result<T, E>;
