use thiserror::Error;

/// Errors raised by the algebra, chart, operator and quadrature layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero divisor: quaternion has zero norm")]
    ZeroDivisor,

    #[error("pole singularity: sin(beta) = 0 at beta = {beta}")]
    PoleSingularity { beta: f64 },

    #[error("real-axis evaluation: r = 0 and the function is not real-valued there")]
    RealAxis,

    #[error("pole of the reciprocal stem at t = r = 0")]
    ReciprocalPole,

    #[error("Mercator coordinate singular at beta = {beta}")]
    MercatorSingularity { beta: f64 },

    #[error("zero function value: u^2 + v^2 = 0, inverse undefined")]
    ZeroFunctionValue,

    #[error("finite-difference step too small: stencil reach {reach} does not fit in distance {distance} to the real axis")]
    StepTooSmall { reach: f64, distance: f64 },

    #[error("generator `{0}` is not single-valued on K (angular dependence)")]
    NotSingleValued(String),

    #[error("region touches real axis: {0}")]
    RegionTouchesAxis(String),

    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),

    #[error("invalid generator text at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("invalid sample window: {0}")]
    InvalidWindow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
