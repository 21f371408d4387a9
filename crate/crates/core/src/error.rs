use thiserror::Error;

/// Every failure mode of the library. Numerical routines never hand back
/// NaN or infinity; they return one of these instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what}: no convergence within {terms} terms")]
    NonConvergent { what: &'static str, terms: usize },

    #[error("{0}: result is not representable as a finite double")]
    Overflow(&'static str),

    #[error("pole: {0}")]
    Pole(String),

    #[error("empty spectrum: m_max = {m_max} does not exceed Delta = {delta}")]
    EmptySpectrum { m_max: i64, delta: i64 },

    #[error("adaptive quadrature exceeded its budget on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64 },

    #[error("eigenvalue {index}: bisection interval stuck at width {width:e}")]
    ConvergenceFailure { index: usize, width: f64 },

    #[error("window [{n_min}, {n_max}] holds fewer than two sites")]
    WindowTooSmall { n_min: i64, n_max: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} failed its self-check (residual {residual:e})")]
    Inconsistent { what: &'static str, residual: f64 },
}

pub type Result<T> = std::result::Result<T, QError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(QError::Domain(msg.into()))
}
