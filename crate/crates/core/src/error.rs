use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical kernels and the physics layers built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("operation not supported for model {0}")]
    UnsupportedModel(String),

    #[error("too close to a branch point at omega = {omega}")]
    BranchPoint { omega: Complex64 },

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("root refinement did not converge in [{a}, {b}] after {iterations} iterations")]
    NoConvergence { a: f64, b: f64, iterations: usize },

    #[error(
        "quadrature hit the subdivision limit: estimate {value}, error estimate {error_estimate:e}"
    )]
    SubdivisionLimit {
        value: Complex64,
        error_estimate: f64,
    },

    #[error("non-finite value encountered at {at}")]
    NonFinite { at: Complex64 },

    #[error("kinematic mismatch: {0}")]
    KinematicMismatch(String),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("winding mismatch: scan found {scanned} roots, argument principle counts {winding}")]
    WindingMismatch { scanned: usize, winding: i64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
