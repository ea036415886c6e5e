use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid periodic coefficients: {0}")]
    InvalidCoeffs(String),
    #[error("matrix {0} is not in the required group")]
    NotInGroup(String),
    #[error("divergent at cusp {0}: coefficient function has nonzero mean")]
    DivergentAtCusp(String),
    #[error("quadrature did not converge: last two estimates {last} and {previous}")]
    QuadratureNonConvergence { last: String, previous: String },
    #[error("ill-conditioned fit: condition estimate {0:e}")]
    IllConditioned(f64),
    #[error("Bernoulli index {n} exceeds cap {cap}")]
    BernoulliCap { n: u32, cap: u32 },
    #[error("precision {0} digits is below the minimum of {1}")]
    Precision(u32, u32),
    #[error("non-integral exponent {0}")]
    NonIntegralExponent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
