use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("index bounds mismatch: {left:?} vs {right:?}")]
    BoundsMismatch { left: Vec<u32>, right: Vec<u32> },

    #[error("component {position} out of range for index {index:?}")]
    ComponentOutOfRange { index: Vec<u32>, position: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("loop geometry infeasible: {0}")]
    Geometry(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("series argument outside the convergence region: max |x| = {radius} > {limit}")]
    OutsideSeriesRegion { radius: f64, limit: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
