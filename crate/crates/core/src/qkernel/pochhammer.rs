//! q-Pochhammer symbols (a; q)_n and (a; q)_inf.

use super::base::{finite, QBase, SeriesPolicy};
use super::scaled::Scaled;
use crate::error::{QError, Result};
use num_complex::Complex64;

/// Relative size below which 1 - a q^k is treated as an exact zero.
/// Parameters of the form q^{-j} are built from rounded powers, and the
/// factor that should vanish comes out as a few ulps instead of zero.
pub(crate) const SNAP: f64 = 1e-13;

#[inline]
pub(crate) fn one_minus(aqk: Complex64) -> Complex64 {
    let f = Complex64::new(1.0, 0.0) - aqk;
    if f.norm() <= SNAP * aqk.norm() {
        Complex64::new(0.0, 0.0)
    } else {
        f
    }
}

/// prod_{k=0}^{n-1} (1 - a q^k); the empty product is 1.
pub fn qpochhammer_finite(a: Complex64, q: QBase, n: usize) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    let mut qk = 1.0;
    for _ in 0..n {
        p *= one_minus(a * qk);
        qk *= q.value();
    }
    p
}

/// Number of factors N with |a| q^N / (1 - q) < rel_tol. Factors are cheap,
/// so the bound is never looser than the unit roundoff.
fn truncation_index(a_abs: f64, q: QBase, policy: &SeriesPolicy) -> Result<usize> {
    if a_abs == 0.0 {
        return Ok(0);
    }
    let qv = q.value();
    let target = policy.rel_tol.min(1e-17) * (1.0 - qv) / a_abs;
    let n = if target >= 1.0 { 0.0 } else { (target.ln() / qv.ln()).floor() + 1.0 };
    if n > policy.max_terms as f64 {
        return Err(QError::NonConvergent { what: "q-Pochhammer product", terms: policy.max_terms });
    }
    Ok(n.max(0.0) as usize)
}

pub(crate) fn qpochhammer_inf_scaled(a: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Scaled> {
    if !(a.re.is_finite() && a.im.is_finite()) {
        return Err(QError::Domain("non-finite argument of (a; q)_inf".into()));
    }
    let n = truncation_index(a.norm(), q, policy)?;
    let mut p = Scaled::ONE;
    // multiply in plain doubles and renormalise in blocks
    let mut block = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let f = one_minus(a * q.pow(k as i64));
        if f.re == 0.0 && f.im == 0.0 {
            return Ok(Scaled::ZERO);
        }
        let size = f.norm();
        if !(1e-10..=1e10).contains(&size) {
            p = p * Scaled::new(f);
            continue;
        }
        block *= f;
        if k % 16 == 15 {
            p = p * Scaled::new(block);
            block = Complex64::new(1.0, 0.0);
        }
    }
    Ok(p * Scaled::new(block))
}

/// (a; q)_inf as a truncated product.
pub fn qpochhammer_inf(a: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Complex64> {
    qpochhammer_inf_scaled(a, q, policy)?.try_complex("q-Pochhammer product").and_then(|z| finite(z, "q-Pochhammer product"))
}

/// (q; q)_inf, which appears in nearly every normalisation.
pub(crate) fn euler(q: QBase, policy: &SeriesPolicy) -> Result<f64> {
    Ok(qpochhammer_inf(Complex64::new(q.value(), 0.0), q, policy)?.re)
}
