//! Confluent basic hypergeometric series 1phi1, its regularisation, 0phi1,
//! the Ramanujan entire function and the third Jackson q-Bessel function.

use super::base::{finite, Accumulator, QBase, SeriesPolicy, SeriesSum};
use super::pochhammer::{euler, one_minus, qpochhammer_inf_scaled};
use super::scaled::Scaled;
use crate::error::{QError, Result};
use num_complex::Complex64;

/// Relative distance to a pole q^{-k} of 1phi1 that counts as hitting it.
const POLE_RADIUS: f64 = 1e-10;

fn check_finite(z: Complex64, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(QError::Domain(format!("non-finite {what}")))
    }
}

/// Index after which |x| q^k has dropped below 1/2, plus a small margin.
fn settle_index(q: QBase, xs: &[f64]) -> usize {
    xs.iter().map(|&x| q.index_below_half(x)).max().unwrap_or(0) + 2
}

/// 1phi1(a; b; q, z) with term ratio
/// (1 - a q^k)(-z) q^k / ((1 - q^{k+1})(1 - b q^k)).
pub(crate) fn phi11_general_sum(
    a: Complex64,
    b: Complex64,
    q: QBase,
    z: Complex64,
    policy: &SeriesPolicy,
) -> Result<SeriesSum> {
    check_finite(a, "numerator parameter")?;
    check_finite(b, "denominator parameter")?;
    check_finite(z, "argument")?;
    let min_terms = settle_index(q, &[a.norm(), b.norm(), z.norm()]);
    let mut acc = Accumulator::new(policy, "1phi1 series", min_terms);
    let mut t = Scaled::ONE;
    let mut qk = Scaled::ONE;
    let mz = Scaled::new(-z);
    for k in 0.. {
        let done = acc.push(t)?;
        let qkf = qk.to_complex().re;
        let den_b = Complex64::new(1.0, 0.0) - b * qkf;
        if (b * qkf).norm() > 0.5 && den_b.norm() < POLE_RADIUS {
            return Err(QError::Domain(format!("1phi1 lower parameter {b} is at the pole q^-{k}")));
        }
        if done {
            break;
        }
        let num_a = one_minus(a * qkf);
        if num_a.re == 0.0 && num_a.im == 0.0 {
            // terminating series
            break;
        }
        let den_q = 1.0 - q.value() * qkf;
        t = t * mz * qk * num_a / (den_b * den_q);
        qk = qk.scale(q.value());
    }
    Ok(acc.finish())
}

/// 1phi1(a; b; q, z).
pub fn phi11_general(a: Complex64, b: Complex64, q: QBase, z: Complex64, policy: &SeriesPolicy) -> Result<Complex64> {
    let s = phi11_general_sum(a, b, q, z, policy)?;
    finite(s.value.try_complex("1phi1")?, "1phi1")
}

/// 1phi1(0; b; q, z); b must stay away from q^{-k}, k >= 0.
pub fn phi11(b: Complex64, q: QBase, z: Complex64, policy: &SeriesPolicy) -> Result<Complex64> {
    phi11_general(Complex64::new(0.0, 0.0), b, q, z, policy)
}

/// (b; q)_inf 1phi1(0; b; q, z) summed termwise:
/// sum_k (b q^k; q)_inf (-z)^k q^{k(k-1)/2} / (q; q)_k.
///
/// The Pochhammer factor is evaluated once, at the first index k0 where
/// |b q^k0| <= 1/2, then shifted down by multiplication and up by division.
/// Shifting up only ever divides by factors of size >= 1/2.
pub(crate) fn phi11_reg_sum(b: Complex64, q: QBase, z: Complex64, policy: &SeriesPolicy) -> Result<SeriesSum> {
    check_finite(b, "parameter")?;
    check_finite(z, "argument")?;
    let k0 = q.index_below_half(b.norm());
    let mut head = vec![Scaled::ZERO; k0 + 1];
    let b_k0 = (Scaled::new(b) * q.pow_scaled(k0 as i64)).to_complex();
    head[k0] = qpochhammer_inf_scaled(b_k0, q, policy)?;
    for k in (0..k0).rev() {
        head[k] = head[k + 1] * one_minus(b * q.pow(k as i64));
    }

    let min_terms = k0.max(q.index_below_half(z.norm())) + 2;
    let mut acc = Accumulator::new(policy, "regularised 1phi1 series", min_terms);
    let mz = Scaled::new(-z);
    let mut c = Scaled::ONE;
    let mut qk = Scaled::ONE;
    let mut p = head[0];
    for k in 0.. {
        if acc.push(p * c)? {
            break;
        }
        let qkf = qk.to_complex().re;
        c = c * mz * qk / Scaled::real(1.0 - q.value() * qkf);
        p = if k < k0 { head[k + 1] } else { p / Scaled::new(one_minus(b * qkf)) };
        qk = qk.scale(q.value());
    }
    Ok(acc.finish())
}

/// Regularised 1phi1, entire in b; finite at b = q^{-k} as well.
pub fn phi11_reg(b: Complex64, q: QBase, z: Complex64, policy: &SeriesPolicy) -> Result<Complex64> {
    let s = phi11_reg_sum(b, q, z, policy)?;
    finite(s.value.try_complex("regularised 1phi1")?, "regularised 1phi1")
}

/// 0phi1(-; 0; q, z) = sum_k q^{k(k-1)} z^k / (q; q)_k.
pub(crate) fn phi01_sum(q: QBase, z: Complex64, policy: &SeriesPolicy) -> Result<SeriesSum> {
    check_finite(z, "argument")?;
    // terms peak where |z| q^{2k} ~ 1
    let min_terms = q.index_below_half(z.norm().sqrt()) + 2;
    let mut acc = Accumulator::new(policy, "0phi1 series", min_terms);
    let zs = Scaled::new(z);
    let q2 = q.value() * q.value();
    let mut t = Scaled::ONE;
    let mut q2k = Scaled::ONE;
    let mut qk1 = q.value();
    loop {
        if acc.push(t)? {
            break;
        }
        t = t * zs * q2k / Scaled::real(1.0 - qk1);
        q2k = q2k.scale(q2);
        qk1 *= q.value();
    }
    Ok(acc.finish())
}

pub fn phi01(q: QBase, z: Complex64, policy: &SeriesPolicy) -> Result<Complex64> {
    let s = phi01_sum(q, z, policy)?;
    finite(s.value.try_complex("0phi1")?, "0phi1")
}

/// A_q(z) = 0phi1(-; 0; q, -q z).
pub fn ramanujan_entire(z: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Complex64> {
    phi01(q, -q.value() * z, policy)
}

pub(crate) fn ramanujan_entire_sum(z: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<SeriesSum> {
    phi01_sum(q, -q.value() * z, policy)
}

/// J_n(z; q) = z^n / (q; q)_inf * regularised 1phi1(0; q^{n+1}; q, q z^2).
pub(crate) fn jackson_qbessel3_scaled(n: i64, z: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Scaled> {
    check_finite(z, "argument")?;
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(if n == 0 { Scaled::ONE } else { Scaled::ZERO });
    }
    let b = q.pow_scaled(n + 1).to_complex();
    let s = phi11_reg_sum(b, q, q.value() * z * z, policy)?;
    Ok(Scaled::powi(z, n) * s.value / Scaled::real(euler(q, policy)?))
}

pub fn jackson_qbessel3(n: i64, z: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Complex64> {
    let v = jackson_qbessel3_scaled(n, z, q, policy)?;
    finite(v.try_complex("q-Bessel function")?, "q-Bessel function")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkernel::pochhammer::qpochhammer_inf;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn q(v: f64) -> QBase {
        QBase::new(v).unwrap()
    }

    #[test]
    fn phi11_at_zero_argument() {
        let p = SeriesPolicy::default();
        assert_eq!(phi11(c(0.3), q(0.5), c(0.0), &p).unwrap(), c(1.0));
    }

    #[test]
    fn phi11_three_term_hand_sum() {
        // b = -q, z = 1e-4: terms beyond k = 2 are below 1e-12
        let p = SeriesPolicy::default();
        let (qv, b, z) = (0.5, -0.5, 1e-4);
        let t1 = -z / ((1.0 - qv) * (1.0 - b));
        let t2 = t1 * (-z * qv) / ((1.0 - qv * qv) * (1.0 - b * qv));
        let v = phi11(c(b), q(qv), c(z), &p).unwrap();
        assert!((v.re - (1.0 + t1 + t2)).abs() < 1e-12);
    }

    #[test]
    fn phi11_pole_is_a_domain_error() {
        let p = SeriesPolicy::default();
        assert!(matches!(phi11(c(4.0), q(0.5), c(0.2), &p), Err(QError::Domain(_))));
        assert!(matches!(phi11(c(1.0), q(0.5), c(0.2), &p), Err(QError::Domain(_))));
    }

    #[test]
    fn regularised_matches_product_times_series() {
        let p = SeriesPolicy::default();
        let (b, z) = (c(0.3), c(0.2));
        let lhs = qpochhammer_inf(b, q(0.5), &p).unwrap() * phi11(b, q(0.5), z, &p).unwrap();
        let rhs = phi11_reg(b, q(0.5), z, &p).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
        assert_eq!(phi11_reg(b, q(0.5), c(0.0), &p).unwrap(), qpochhammer_inf(b, q(0.5), &p).unwrap());
    }

    #[test]
    fn regularised_is_symmetric() {
        let p = SeriesPolicy::default();
        let a = phi11_reg(c(0.7), q(0.5), c(0.2), &p).unwrap();
        let b = phi11_reg(c(0.2), q(0.5), c(0.7), &p).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn regularised_is_continuous_at_a_pole() {
        // Richardson extrapolation of (b; q)_inf 1phi1 along b = q^-2 (1 + eps)
        let p = SeriesPolicy::default();
        let b0 = 4.0;
        let f = |eps: f64| {
            let b = c(b0 * (1.0 + eps));
            qpochhammer_inf(b, q(0.5), &p).unwrap() * phi11(b, q(0.5), c(0.3), &p).unwrap()
        };
        let limit = 2.0 * f(1e-6) - f(2e-6);
        let v = phi11_reg(c(b0), q(0.5), c(0.3), &p).unwrap();
        assert!(v.norm() > 1e-3);
        assert!((v - limit).norm() < 1e-8 * v.norm());
    }

    #[test]
    fn phi01_partial_sums() {
        let p = SeriesPolicy::default();
        assert_eq!(phi01(q(0.5), c(0.0), &p).unwrap(), c(1.0));
        let (qv, z) = (0.5f64, 0.1f64);
        let mut s = 0.0;
        let mut poch = 1.0;
        for k in 0..5 {
            if k > 0 {
                poch *= 1.0 - qv.powi(k);
            }
            s += qv.powi(k * (k - 1)) * z.powi(k) / poch;
        }
        assert!((phi01(q(qv), c(z), &p).unwrap().re - s).abs() < 1e-10);
    }

    #[test]
    fn ramanujan_six_terms() {
        let p = SeriesPolicy::default();
        assert_eq!(ramanujan_entire(c(0.0), q(0.25), &p).unwrap(), c(1.0));
        let qv = 0.25f64;
        let mut s = 0.0;
        let mut poch = 1.0;
        for k in 0..6 {
            if k > 0 {
                poch *= 1.0 - qv.powi(k);
            }
            s += (-1.0f64).powi(k) * qv.powi(k * k) / poch;
        }
        assert!((ramanujan_entire(c(1.0), q(qv), &p).unwrap().re - s).abs() < 1e-12);
    }

    #[test]
    fn qbessel_values_at_origin_and_reflection() {
        let p = SeriesPolicy::default();
        assert_eq!(jackson_qbessel3(0, c(0.0), q(0.5), &p).unwrap(), c(1.0));
        assert_eq!(jackson_qbessel3(3, c(0.0), q(0.5), &p).unwrap(), c(0.0));
        let (n, z, qv) = (2i64, 0.3f64, 0.5f64);
        let lhs = jackson_qbessel3(n, c(z), q(qv), &p).unwrap();
        let rhs = qv.powf(-(n as f64) / 2.0) * jackson_qbessel3(-n, c(z * qv.powf(-(n as f64) / 2.0)), q(qv), &p).unwrap();
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm());
    }

    #[test]
    fn qbessel_summation_formula() {
        let p = SeriesPolicy::default();
        let s: f64 = (-60..=60).map(|j| jackson_qbessel3(j, c(0.5), q(0.5), &p).unwrap().re.powi(2)).sum();
        assert!((s - 1.0 / 0.75).abs() < 1e-12);
    }
}
