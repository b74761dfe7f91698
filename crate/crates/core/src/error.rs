use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vector is not unit length (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("angle out of range: {0}")]
    AngleRange(String),

    #[error("invalid topology: {0}")]
    Topology(String),

    #[error("invalid gain function: {0}")]
    Gain(String),

    #[error("invalid state: {0}")]
    State(String),

    #[error("RPY chart is singular at agent {agent} (cos phi = {cos_phi:e})")]
    SingularChart { agent: usize, cos_phi: f64 },

    #[error("invalid simulation config: {0}")]
    Config(String),

    #[error("non-finite state at t = {time} (step {step})")]
    NonFinite { time: f64, step: usize },

    #[error("formation not converged over the requested window: {0}")]
    NotConverged(String),

    #[error("cosines are not realizable by four unit vectors: {0}")]
    Unrealizable(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("trajectory parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
