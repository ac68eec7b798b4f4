use thiserror::Error;

/// Errors raised by the geometry, kernel, bound and oracle routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("spatial dimension must be at least 1")]
    NonPositiveDimension,

    #[error("time must be positive (got {0})")]
    NonPositiveTime(f64),

    #[error("coordinates must be finite")]
    NonFiniteCoordinate,

    #[error("the two points coincide")]
    IdenticalPoints,

    #[error("geodesic is a vertical ray; one boundary foot is at infinity")]
    VerticalArc,

    #[error("projections onto the boundary coincide; no direction is defined")]
    DegenerateDirection,

    #[error("closed form is 0/0 when the projections coincide; use the vertical limits")]
    DegenerateConfiguration,

    #[error("bound requires t_B > t_A (got t_A = {t_a}, t_B = {t_b})")]
    NonForwardTimes { t_a: f64, t_b: f64 },

    #[error("constant must be finite and nonnegative (got {0})")]
    InvalidConstant(f64),

    #[error("invalid quadrature configuration: {0}")]
    InvalidQuadratureConfig(String),

    #[error("quadrature did not reach tolerance {tolerance:e} within depth {max_depth} (estimated error {estimate:e})")]
    QuadratureNonConvergence {
        tolerance: f64,
        max_depth: u32,
        estimate: f64,
    },

    #[error("tail of the integral could not be bounded below {0:e}")]
    TailEstimateFailure(f64),

    #[error("density quadrature is supported for dimension <= 3 (got {0})")]
    UnsupportedDimension(usize),

    #[error("grid of {requested} points exceeds the limit of {limit}")]
    ResolutionExceeded { requested: f64, limit: f64 },

    #[error("invalid initial measure: {0}")]
    InvalidMeasure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
