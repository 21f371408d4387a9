//! Eigenvalues alpha^{-1} q^m + alpha q^{-m} (m > Delta) and eigenvectors.

use super::params::BParams;
use super::solutions::f_eval;
use crate::error::{domain, QError, Result};
use crate::oracle::{tail_bounded_sum, SumRange};
use crate::qkernel::{euler, Scaled, SeriesPolicy};
use crate::window::SpectrumWindow;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BEigenvalue {
    pub m: i64,
    pub value: f64,
}

/// mu_m = alpha^{-1} q^m + alpha q^{-m}
pub fn eigenvalue_b(m: i64, p: &BParams) -> f64 {
    p.q().pow(m) / p.alpha() + p.alpha() * p.q().pow(-m)
}

/// The eigen-parameter z_m = alpha^{-1} q^m, |z_m| < 1 for m > Delta.
pub(crate) fn eigen_parameter(m: i64, p: &BParams) -> f64 {
    p.q().pow(m) / p.alpha()
}

/// Eigenvalues for Delta < m <= m_max; empty for the free operator.
pub fn point_spectrum_b(p: &BParams, m_max: i64) -> Result<Vec<BEigenvalue>> {
    let Some(delta) = p.delta() else {
        return Ok(Vec::new());
    };
    if m_max <= delta {
        return Err(QError::EmptySpectrum { m_max, delta });
    }
    Ok((delta + 1..=m_max).map(|m| BEigenvalue { m, value: eigenvalue_b(m, p) }).collect())
}

fn check_index(m: i64, p: &BParams) -> Result<i64> {
    let delta = p.require_nonfree("eigenvector")?;
    if m <= delta {
        return domain(format!("m = {m} does not exceed Delta = {delta}"));
    }
    Ok(delta)
}

/// v_{m,j} = f_j(alpha^{-1} q^m), kept in scaled form.
pub(crate) fn eigvec_component(m: i64, j: i64, p: &BParams, policy: &SeriesPolicy) -> Result<Scaled> {
    Ok(f_eval(j, Complex64::new(eigen_parameter(m, p), 0.0), p, policy)?.value)
}

/// Components v_{m,j} of the (unnormalised) eigenvector for j in the window.
pub fn eigenvector_b(m: i64, p: &BParams, j_range: SpectrumWindow, policy: &SeriesPolicy) -> Result<Vec<f64>> {
    check_index(m, p)?;
    j_range
        .iter()
        .map(|j| Ok(eigvec_component(m, j, p, policy)?.try_complex("eigenvector component")?.re))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMethod {
    ClosedForm,
    DirectSum,
}

/// ||v_m||.
pub fn eigenvector_norm(m: i64, p: &BParams, method: NormMethod, policy: &SeriesPolicy) -> Result<f64> {
    check_index(m, p)?;
    match method {
        NormMethod::ClosedForm => {
            let (q, a) = (p.q(), p.alpha());
            let z = eigen_parameter(m, p);
            let v = Scaled::powi_real(a.abs(), -m) * q.triangular(m, 1) * Scaled::real(euler(q, policy)?)
                / Scaled::real((1.0 - z * z).sqrt());
            Ok(v.try_complex("eigenvector norm")?.re)
        }
        NormMethod::DirectSum => {
            let z2 = eigen_parameter(m, p).powi(2);
            let a2 = p.alpha().powi(2);
            let qv = p.q().value();
            // v_{j+1}^2 / v_j^2 -> alpha^{-2} q^{2j+2} at +inf and z_m^2 at -inf
            let ratio = |j: i64| {
                if j >= m {
                    (4.0 * qv.powi(2 * (j as i32) + 2) / a2).min(1.0)
                } else if j <= m - 8 {
                    (1.5 * z2).min(0.5 * (1.0 + z2))
                } else {
                    1.0
                }
            };
            let s = tail_bounded_sum(
                |j| {
                    let v = eigvec_component(m, j + m, p, policy)?.try_complex("eigenvector component")?.re;
                    Ok(Complex64::new(v * v, 0.0))
                },
                |j| ratio(j + m),
                SumRange::Bilateral,
                &SeriesPolicy { rel_tol: policy.rel_tol.min(1e-15), ..*policy },
            )?;
            Ok(s.value.re.sqrt())
        }
    }
}
