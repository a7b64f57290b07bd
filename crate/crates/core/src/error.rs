use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("edge length must be positive, got {0}")]
    NonPositiveLength(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("point is not on the graph: {0}")]
    PointOffGraph(String),
    #[error("invalid piecewise-linear function: {0}")]
    InvalidFunction(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("edge lengths are not generic: {0}")]
    NotGeneric(String),
    /// A statement that is a theorem under the stated hypotheses failed.
    #[error("theorem check falsified: {0}")]
    Falsified(String),
    #[error("iteration cap {cap} exceeded in {what}")]
    IterationCap { what: &'static str, cap: usize },
    #[error("search space cap {cap} exceeded in {what}")]
    SearchCap { what: &'static str, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
