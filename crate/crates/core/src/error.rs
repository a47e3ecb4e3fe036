use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),
    #[error("gamma function overflows at x = {0}")]
    Overflow(f64),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("series did not converge: {0}")]
    Nonconvergence(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error("point {0:?} lies outside the domain")]
    PointOutsideDomain(Vec<f64>),
    #[error("ill-conditioned fit: {0}")]
    IllConditionedFit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
