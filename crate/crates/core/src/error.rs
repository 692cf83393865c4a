use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error)]
pub enum GeoError {
    #[error("input point set is empty")]
    EmptyInput,
    #[error("polygon has a pair of parallel edges")]
    ParallelEdges,
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("smoothing radius too small: {0}")]
    RadiusTooSmall(String),
    #[error("sandwich approximation failed: {0}")]
    ApproximationFailure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cut parameter search exhausted: {0}")]
    SearchExhausted(String),
    #[error("radius schedule exhausted: {0}")]
    RadiusScheduleExhausted(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}
