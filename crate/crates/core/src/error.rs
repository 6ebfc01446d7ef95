use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("ellipticity violated: margin {margin:e} <= 0")]
    Ellipticity { margin: f64 },
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("kernel evaluated at its singularity")]
    Singularity,
    #[error("irregular parametrization: speed {speed:e} below {min:e} at t = {t}")]
    Irregular { t: f64, speed: f64, min: f64 },
    #[error("capability error: {0}")]
    Capability(String),
    #[error("point at distance {distance:e} is closer than the precision floor {floor:e} (achieved error estimate {estimate:e})")]
    Precision {
        distance: f64,
        floor: f64,
        estimate: f64,
    },
    #[error("evaluation point lies on the boundary (node {node})")]
    OnBoundary { node: usize },
    #[error("boundary trace did not converge: error estimate {estimate:e}, observed order {order:.3}")]
    Trace { estimate: f64, order: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
