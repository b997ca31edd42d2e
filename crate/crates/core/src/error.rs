use ecsrel_milp::MilpError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EcsError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("feeder affiliation unavailable: {0}")]
    AffiliationUnavailable(String),
    #[error("missing device data: {0}")]
    MissingDeviceData(String),
    #[error("scenario {0} is infeasible")]
    Infeasible(String),
    #[error("planning-mode models couple all scenarios and cannot be decomposed")]
    NotDecomposable,
    #[error("topology too large to enumerate: {cables} cables (limit {limit})")]
    TooLarge { cables: usize, limit: usize },
    #[error("no plan for cable {0}")]
    MissingPlan(String),
    #[error(transparent)]
    Solver(#[from] MilpError),
}
