use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter {name} must be finite, got {value}")]
    NonFiniteParameter { name: &'static str, value: f64 },

    #[error("uniform coupling J must be non-negative, got {0}")]
    NegativeCoupling(f64),

    #[error("inverse temperature must be finite and positive, got {0}")]
    InvalidBeta(f64),

    #[error("temperature must be finite and non-negative, got {0}")]
    InvalidTemperature(f64),

    #[error("angle {0} lies outside [0, pi]")]
    AngleOutOfDomain(f64),

    #[error("invalid quadrature settings: {0}")]
    InvalidQuadSpec(String),

    /// The adaptive rule ran out of subdivisions. `value` is the best estimate.
    #[error("quadrature tolerance not reached: value {value:e}, error estimate {error:e}")]
    ToleranceNotReached { value: f64, error: f64 },

    #[error("ln Z has no finite zero-temperature limit; use the ground-state energy")]
    ZeroTemperatureUnsupported,

    #[error("invalid separation R = {0}: {1}")]
    InvalidSeparation(usize, &'static str),

    #[error("concurrence radicand {0:e} is negative beyond round-off")]
    NegativeRadicand(f64),

    #[error("not a valid two-qubit state: {0}")]
    InvalidState(String),

    #[error("witness undefined for J = j = 0")]
    DegenerateCoupling,

    #[error("dense diagonalization limited to 12 sites, got {0}")]
    DimensionTooLarge(usize),

    #[error("chain length must be even and at least 4, got {0}")]
    InvalidChainLength(usize),

    #[error("invalid scan: {0}")]
    InvalidScan(String),
}
