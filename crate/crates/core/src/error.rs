use thiserror::Error;

use crate::expr::EvalError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value where a finite real is required")]
    NonFinite,

    #[error("zero-length displacement vector")]
    ZeroVector,

    /// The secant basis is too close to parallel. Carries the measured
    /// `sin(theta)` and the floor it was checked against.
    #[error("degenerate secant basis: sin(theta) = {sin_theta:e} is below the floor {floor:e}")]
    DegenerateBasis { sin_theta: f64, floor: f64 },

    #[error("invalid sequence spec: {0}")]
    InvalidSpec(String),

    #[error("radius {radius:e} at k = {k} is below the minimum radius {min:e}")]
    RadiusUnderflow { k: u64, radius: f64, min: f64 },

    #[error("no direction pair met the angle floor {floor} after {attempts} draws")]
    SamplingExhausted { floor: f64, attempts: u32 },

    #[error(transparent)]
    Evaluation(#[from] EvalError),
}
