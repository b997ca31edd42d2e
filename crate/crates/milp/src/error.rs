use thiserror::Error;

#[derive(Debug, Error)]
pub enum MilpError {
    #[error("solver unavailable: {0}")]
    SolverUnavailable(String),
    #[error("solver error: {0}")]
    SolverError(String),
}
