use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 3, got {0}")]
    InvalidDimension(usize),
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("quadrature level must be at least 1, got {0}")]
    InvalidLevel(usize),
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("evaluation at the kernel pole (separation {0:e})")]
    Pole(f64),
    #[error("point lies outside the admissible domain: {0}")]
    OutsideDomain(String),
    #[error("point is not on the sphere of radius {radius} (norm {norm})")]
    NotOnSphere { radius: f64, norm: f64 },
    #[error("mode {0} has zero frequency; no bounded inverse exists")]
    ZeroFrequency(usize),
    #[error("test function must be symmetric under x -> -x")]
    AsymmetricTestFunction,
    #[error("axis {axis} out of range for dimension {dim}")]
    InvalidAxis { axis: usize, dim: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
