use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("contour touches singularity: {0}")]
    Singularity(String),
    #[error("no convergence in {what}: coarse estimate {coarse:e}, fine estimate {fine:e}")]
    Convergence {
        what: String,
        coarse: f64,
        fine: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
