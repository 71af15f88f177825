use thiserror::Error;

/// Errors raised by the sub-Lorentzian routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector is not horizontal (v3 = {0})")]
    NonHorizontal(f64),
    #[error("control ({u1}, {u2}) violates u1 >= |u2|")]
    InadmissibleControl { u1: f64, u2: f64 },
    #[error("parameter must be nonnegative, got {0}")]
    NegativeParameter(f64),
    #[error("argument {0} outside (-1/4, 1/4)")]
    OutOfDomain(f64),
    #[error("time must be positive, got {0}")]
    NonpositiveTime(f64),
    #[error("point ({x}, {y}, {z}) is not in the chronological future I+")]
    NotInterior { x: f64, y: f64, z: f64 },
    #[error("point ({x}, {y}, {z}) is outside J+")]
    Unreachable { x: f64, y: f64, z: f64 },
    #[error("target coincides with the identity")]
    DegenerateTarget,
    #[error("no schedule reached the target (residual {residual:e})")]
    NoFeasibleSchedule { residual: f64 },
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error("plane does not meet the sphere")]
    EmptySection,
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("non-finite input")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, Error>;
