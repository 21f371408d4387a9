//! The solutions f and g of u_{n-1} + alpha q^{-n} u_n + u_{n+1} = mu(z) u_n.

use super::params::BParams;
use crate::error::{domain, QError, Result};
use crate::qkernel::{finite, phi11_reg_sum, theta_scaled, Scaled, SeriesPolicy};
use num_complex::Complex64;

/// A point of the punctured unit disk and its Joukowski image z + 1/z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JoukowskiPoint {
    pub z: Complex64,
    pub mu: Complex64,
}

impl JoukowskiPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        let r = z.norm();
        if !(r > 0.0 && r <= 1.0 + 1e-15 && z.re.is_finite() && z.im.is_finite()) {
            return domain(format!("|z| = {r} is not in (0, 1]"));
        }
        Ok(JoukowskiPoint { z, mu: z + z.inv() })
    }

    /// The preimage of mu with |z| <= 1.
    pub fn from_mu(mu: Complex64) -> Result<Self> {
        if !(mu.re.is_finite() && mu.im.is_finite()) {
            return domain("non-finite spectral parameter");
        }
        let d = (mu * mu - 4.0).sqrt();
        let (a, b) = ((mu - d) / 2.0, (mu + d) / 2.0);
        let z = if a.norm() <= b.norm() { a } else { b };
        let p = JoukowskiPoint::new(z)?;
        if (p.mu - mu).norm() > 1e-14 * (1.0 + mu.norm()) * 16.0 {
            return Err(QError::Inconsistent { what: "Joukowski inverse", residual: (p.mu - mu).norm() });
        }
        Ok(p)
    }
}

fn check_z(z: Complex64) -> Result<()> {
    if z.re == 0.0 && z.im == 0.0 {
        return domain("the solutions need z != 0");
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return domain("non-finite z");
    }
    Ok(())
}

/// Value together with the sum of moduli of its series terms (same scaling).
#[derive(Clone, Copy, Debug)]
pub(crate) struct Evaluated {
    pub value: Scaled,
    pub magnitude: Scaled,
}

/// f_n(z) = (-1)^n alpha^{-n} q^{n(n+1)/2}
///          * regularised 1phi1(0; z^{-1} alpha^{-1} q^{n+1}; q, z alpha^{-1} q^{n+1}).
pub(crate) fn f_eval(n: i64, z: Complex64, p: &BParams, policy: &SeriesPolicy) -> Result<Evaluated> {
    p.require_nonfree("f_n")?;
    check_z(z)?;
    let q = p.q();
    let inv_a = 1.0 / p.alpha();
    let qn1 = q.pow_scaled(n + 1);
    let b = (qn1 * (z * p.alpha()).inv()).to_complex();
    let w = (qn1 * (z * inv_a)).to_complex();
    let s = phi11_reg_sum(b, q, w, policy)?;
    let pre = Scaled::powi_real(-inv_a, n) * q.triangular(n, 1);
    Ok(Evaluated { value: pre * s.value, magnitude: pre.abs() * s.magnitude })
}

/// g_n(z) = z^{-n} regularised 1phi1(0; z alpha q^{1-n}; q, q z^2).
pub(crate) fn g_eval(n: i64, z: Complex64, p: &BParams, policy: &SeriesPolicy) -> Result<Evaluated> {
    p.require_nonfree("g_n")?;
    check_z(z)?;
    let q = p.q();
    let b = (q.pow_scaled(1 - n) * (z * p.alpha())).to_complex();
    let s = phi11_reg_sum(b, q, q.value() * z * z, policy)?;
    let pre = Scaled::powi(z, -n);
    Ok(Evaluated { value: pre * s.value, magnitude: pre.abs() * s.magnitude })
}

pub fn f_n(n: i64, z: Complex64, p: &BParams, policy: &SeriesPolicy) -> Result<Complex64> {
    finite(f_eval(n, z, p, policy)?.value.try_complex("f_n")?, "f_n")
}

pub fn g_n(n: i64, z: Complex64, p: &BParams, policy: &SeriesPolicy) -> Result<Complex64> {
    finite(g_eval(n, z, p, policy)?.value.try_complex("g_n")?, "g_n")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WronskianMethod {
    /// f_{n+1} g_n - f_n g_{n+1} at n = -10, 0, 10; the spread is checked.
    Direct,
    /// -z^{-1} theta_q(alpha z).
    ClosedForm,
}

/// f_{n+1} g_n - f_n g_{n+1} and the size of the two products.
pub fn wronskian_at(n: i64, z: Complex64, p: &BParams, policy: &SeriesPolicy) -> Result<(Complex64, f64)> {
    let f0 = f_eval(n, z, p, policy)?.value;
    let f1 = f_eval(n + 1, z, p, policy)?.value;
    let g0 = g_eval(n, z, p, policy)?.value;
    let g1 = g_eval(n + 1, z, p, policy)?.value;
    let a = f1 * g0;
    let b = f0 * g1;
    let w = (a - b).try_complex("Wronskian")?;
    let scale = a.abs_f64() + b.abs_f64();
    Ok((w, scale))
}

pub(crate) fn wronskian_closed_scaled(z: Complex64, p: &BParams, policy: &SeriesPolicy) -> Result<Scaled> {
    p.require_nonfree("W(f, g)")?;
    check_z(z)?;
    Ok(-(theta_scaled(z * p.alpha(), p.q(), policy)? / Scaled::new(z)))
}

pub fn wronskian_fg(z: Complex64, p: &BParams, method: WronskianMethod, policy: &SeriesPolicy) -> Result<Complex64> {
    match method {
        WronskianMethod::ClosedForm => finite(wronskian_closed_scaled(z, p, policy)?.try_complex("Wronskian")?, "Wronskian"),
        WronskianMethod::Direct => {
            let samples: Vec<(Complex64, f64)> =
                [-10, 0, 10].iter().map(|&n| wronskian_at(n, z, p, policy)).collect::<Result<_>>()?;
            let w0 = samples[1].0;
            let scale = samples.iter().map(|s| s.1).fold(0.0, f64::max);
            let spread = samples.iter().map(|s| (s.0 - w0).norm()).fold(0.0, f64::max);
            if spread > 1e-9 * scale.max(w0.norm()) {
                return Err(QError::Inconsistent { what: "Wronskian constancy", residual: spread });
            }
            Ok(w0)
        }
    }
}

/// |u_{n-1} + alpha q^{-n} u_n + u_{n+1} - mu u_n| relative to the size of
/// the four terms.
pub fn recurrence_residual(u: [Complex64; 3], n: i64, mu: Complex64, p: &BParams) -> f64 {
    let d = p.alpha() * p.q().pow(-n);
    let r = u[0] + d * u[1] + u[2] - mu * u[1];
    let scale = u[0].norm() + (d * u[1]).norm() + u[2].norm() + (mu * u[1]).norm();
    if scale == 0.0 {
        0.0
    } else {
        r.norm() / scale
    }
}
