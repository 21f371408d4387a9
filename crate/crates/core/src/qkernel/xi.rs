//! The meromorphic function xi_q(z) = sum_n q^{n/2} / (1 + z q^{n-1/2}).

use super::base::{finite, QBase, SeriesPolicy};
use super::pochhammer::qpochhammer_inf_scaled;
use super::scaled::Scaled;
use super::theta::theta_scaled;
use crate::error::{domain, QError, Result};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XiMethod {
    /// The defining sum over simple poles.
    MittagLeffler,
    /// The Laurent series, valid for q^{1/2} < |z| < q^{-1/2}.
    Laurent,
    /// The ratio of theta functions.
    ClosedForm,
}

const POLE_RADIUS: f64 = 1e-10;

fn check_poles(z: Complex64, q: QBase) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return domain("xi needs a finite argument");
    }
    if z.norm() == 0.0 {
        return domain("xi is not evaluated at z = 0");
    }
    // nearest pole -q^{n+1/2} in modulus
    let n = (z.norm().ln() / q.value().ln() - 0.5).round();
    let pole = -q.value().powf(n + 0.5);
    if (z - pole).norm() < POLE_RADIUS * pole.abs() {
        return domain(format!("z = {z} is a pole of xi"));
    }
    Ok(())
}

pub fn xi(z: Complex64, q: QBase, method: XiMethod, policy: &SeriesPolicy) -> Result<Complex64> {
    check_poles(z, q)?;
    let v = match method {
        XiMethod::MittagLeffler => mittag_leffler(z, q, policy)?,
        XiMethod::Laurent => laurent(z, q, policy)?,
        XiMethod::ClosedForm => closed_form(z, q, policy)?.try_complex("xi")?,
    };
    finite(v, "xi")
}

/// Symmetric summation of `term(n)` over n in Z. The tails are bounded by
/// geometric series with ratios `r_plus` and `r_minus` (valid for n beyond
/// `start`), and the loop stops once both bounds are below rel_tol.
fn bilateral_geometric(
    term: impl Fn(i64) -> Complex64,
    r_plus: f64,
    r_minus: f64,
    start: i64,
    policy: &SeriesPolicy,
    what: &'static str,
) -> Result<Complex64> {
    let mut s = term(0);
    for n in 1.. {
        let tp = term(n);
        let tm = term(-n);
        s += tp + tm;
        let floor = policy.rel_tol * s.norm().max(policy.abs_floor);
        if n >= start && tp.norm() * r_plus / (1.0 - r_plus) <= floor && tm.norm() * r_minus / (1.0 - r_minus) <= floor {
            return Ok(s);
        }
        if n as usize >= policy.max_terms {
            break;
        }
    }
    Err(QError::NonConvergent { what, terms: policy.max_terms })
}

fn mittag_leffler(z: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Complex64> {
    let qv = q.value();
    let sq = qv.sqrt();
    // beyond the pole region the terms shrink by sqrt(q) per step, up to a
    // factor that tends to 1; the bound uses a slightly larger ratio
    let start = (z.norm().ln().abs() / q.log_inv()).ceil() as i64 + 4;
    let r = sq * (1.0 + 2.0 * sq.powi(4));
    let r = if r < 1.0 { r } else { 0.5 * (1.0 + sq) };
    let term = |n: i64| {
        let hn = n as f64;
        Complex64::new(qv.powf(hn / 2.0), 0.0) / (1.0 + z * qv.powf(hn - 0.5))
    };
    bilateral_geometric(term, r, r, start, policy, "xi Mittag-Leffler sum")
}

fn laurent(z: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Complex64> {
    let qv = q.value();
    let sq = qv.sqrt();
    let a = z.norm();
    if !(a > sq && a < 1.0 / sq) {
        return domain(format!("|z| = {a} is outside the Laurent annulus"));
    }
    // powers folded into one base so neither side under- or overflows:
    // k >= 0: (-z sqrt q)^k sqrt q / (1 - q^{k+1/2})
    // k < 0:  -(-z / sqrt q)^k / (1 - q^{-k-1/2})
    let up = -z * sq;
    let down = -z / sq;
    let term = |k: i64| {
        if k >= 0 {
            up.powi(k as i32) * (sq / (1.0 - qv.powf(k as f64 + 0.5)))
        } else {
            -down.powi(k as i32) / (1.0 - qv.powf(-(k as f64) - 0.5))
        }
    };
    // |term(k+1)/term(k)| -> sqrt(q)|z| and |term(-k-1)/term(-k)| -> sqrt(q)/|z|
    let slack = 1.0 + 2.0 * qv.powi(4);
    let rp = (sq * a * slack).min(0.5 * (1.0 + sq * a));
    let rm = (sq / a * slack).min(0.5 * (1.0 + sq / a));
    bilateral_geometric(term, rp, rm, 4, policy, "xi Laurent series")
}

pub(crate) fn closed_form(z: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Scaled> {
    check_poles(z, q)?;
    let qv = q.value();
    let pre = qpochhammer_inf_scaled(Complex64::new(qv, 0.0), q, policy)?
        / qpochhammer_inf_scaled(Complex64::new(qv.sqrt(), 0.0), q, policy)?;
    let num = theta_scaled(-z, q, policy)?;
    let den = theta_scaled(-z / qv.sqrt(), q, policy)?;
    Ok(pre * pre * num / den)
}
