use thiserror::Error;

/// Which coordinate chart broke down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Singularity {
    /// `r + x^{n+1}` vanished: the base point sits at the south pole, where
    /// the north-chart lift divides by zero.
    BaseSouthPole,
    /// The fiber element approached `-1`, the point at infinity of the
    /// stereographic chart.
    FiberAntipode,
    /// The base point collapsed onto the origin (`r = 0`).
    Origin,
}

impl std::fmt::Display for Singularity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Singularity::BaseSouthPole => f.write_str("south pole of the base"),
            Singularity::FiberAntipode => f.write_str("antipode of the fiber chart"),
            Singularity::Origin => f.write_str("origin of the base"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported dimension {0}; expected one of {1}")]
    UnsupportedDimension(usize, &'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("chart singularity at the {0}")]
    ChartSingularity(Singularity),

    #[error("fiber element must have unit norm, got {0}")]
    InvalidFiberElement(f64),

    #[error("operation requires n = {expected}, got n = {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("first spinor component u1 vanishes")]
    ZeroU1,

    #[error("rotation parameters are not antisymmetric (max |w + w^T| = {0})")]
    NonAntisymmetric(f64),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("exact free flow needs a constant conformal factor")]
    NonconstantMetric,

    #[error("trajectory has no samples")]
    EmptyTrajectory,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
