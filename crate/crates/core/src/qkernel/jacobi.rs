//! Jacobi theta functions through theta_{q^2} products.

use super::base::{QBase, SeriesPolicy};
use super::pochhammer::qpochhammer_inf_scaled;
use super::scaled::Scaled;
use super::theta::theta_scaled;
use crate::error::Result;
use num_complex::Complex64;

/// The four Jacobi theta functions at a common point (z | q).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaFour {
    pub v1: Complex64,
    pub v2: Complex64,
    pub v3: Complex64,
    pub v4: Complex64,
}

/// Same values before conversion to doubles.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ThetaFourScaled {
    pub v1: Scaled,
    pub v2: Scaled,
    pub v3: Scaled,
    pub v4: Scaled,
}

pub(crate) fn jacobi_thetas_scaled(z: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<ThetaFourScaled> {
    let q2 = q.power(2);
    let i = Complex64::new(0.0, 1.0);
    let e = (2.0 * i * z).exp();
    let c = qpochhammer_inf_scaled(Complex64::new(q2.value(), 0.0), q2, policy)?;
    let lead = c * (q.value().powf(0.25) * (-i * z).exp());
    Ok(ThetaFourScaled {
        v1: lead * theta_scaled(e, q2, policy)? * i,
        v2: lead * theta_scaled(-e, q2, policy)?,
        v3: c * theta_scaled(-q.value() * e, q2, policy)?,
        v4: c * theta_scaled(q.value() * e, q2, policy)?,
    })
}

pub fn jacobi_thetas(z: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<ThetaFour> {
    let s = jacobi_thetas_scaled(z, q, policy)?;
    Ok(ThetaFour {
        v1: s.v1.try_complex("theta_1")?,
        v2: s.v2.try_complex("theta_2")?,
        v3: s.v3.try_complex("theta_3")?,
        v4: s.v4.try_complex("theta_4")?,
    })
}
