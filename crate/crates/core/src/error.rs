use thiserror::Error;

/// Errors raised by the geometry kernels and the experiment pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid surface model: {0}")]
    InvalidModel(String),

    #[error("point at distance {r} lies outside the domain ball of radius {m}")]
    OutsideDomain { r: f64, m: f64 },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("angle {0} is outside [0, pi)")]
    InvalidAngle(f64),

    #[error("hypotenuse {c} exceeds the domain diameter {diameter}")]
    HypotenuseTooLong { c: f64, diameter: f64 },

    #[error("pair is on the diagonal (distance {0:e}); resample")]
    DiagonalPair(f64),

    #[error("derivative order must be at least 1")]
    InvalidOrder,

    #[error("sampler produced only {accepted} of {requested} pairs after {attempts} attempts")]
    SamplerExhausted { requested: usize, accepted: usize, attempts: usize },

    #[error("invalid iterated function system: {0}")]
    InvalidIfs(String),

    #[error("attractor would contain {0} points, more than the limit of 10^7")]
    SizeOverflow(u128),

    #[error("scaled point cloud reaches radius {max_radius}, beyond the domain radius {m}")]
    RadiusOverflow { max_radius: f64, m: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("box counting needs at least 4 scales, got {0}")]
    TooFewScales(usize),

    #[error("invalid scale list: {0}")]
    InvalidScales(String),

    #[error("point is not on the polar great circle (<q, base> = {0:e})")]
    NotOnPolarCircle(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
