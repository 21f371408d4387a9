//! The theta function theta_q(x) = (x, q/x; q)_inf.

use super::base::{finite, QBase, SeriesPolicy};
use super::pochhammer::{euler, qpochhammer_inf_scaled};
use super::scaled::Scaled;
use crate::error::{domain, QError, Result};
use num_complex::Complex64;
use twofloat::TwoFloat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaMethod {
    /// The defining product (x; q)_inf (q/x; q)_inf.
    Product,
    /// The triple-product series divided by (q; q)_inf.
    BilateralSum,
}

/// theta_q(x) for x != 0.
pub fn theta(x: Complex64, q: QBase, method: ThetaMethod, policy: &SeriesPolicy) -> Result<Complex64> {
    let v = match method {
        ThetaMethod::Product => theta_product(x, q, policy)?,
        ThetaMethod::BilateralSum => theta_bilateral(x, q, policy)?,
    };
    finite(v.try_complex("theta")?, "theta")
}

fn check_arg(x: Complex64) -> Result<()> {
    if x.re == 0.0 && x.im == 0.0 {
        return domain("theta_q(x) needs x != 0");
    }
    if !(x.re.is_finite() && x.im.is_finite()) {
        return domain("theta_q(x) needs a finite argument");
    }
    Ok(())
}

fn theta_product(x: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Scaled> {
    check_arg(x)?;
    Ok(qpochhammer_inf_scaled(x, q, policy)? * qpochhammer_inf_scaled(q.value() / x, q, policy)?)
}

/// The series is summed at the reduced argument, where its terms are O(1).
/// For q near 1 they still cancel down to theta(y) (q; q)_inf, which can be
/// 1e-9 of the term size, so the terms are carried in double-double.
fn theta_bilateral(x: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Scaled> {
    check_arg(x)?;
    let (k, y) = reduce(x, q);
    let qd = TwoFloat::from(q.value());
    let my = Dd::new(-y);
    let my_inv = my.recip();
    let (mut pos, mut neg) = (Dd::one(), Dd::one());
    // q^{n-1} and q^n at step n
    let (mut q_prev, mut q_n) = (TwoFloat::from(1.0), qd);
    let mut sum = Dd::one();
    for n in 1..=policy.max_terms as i64 {
        pos = pos.mul(my).scale(q_prev);
        neg = neg.mul(my_inv).scale(q_n);
        sum = sum.add(pos).add(neg);
        q_prev = q_n;
        q_n *= qd;
        // the term size is O(1) and tails shrink superexponentially
        if n >= 3 && pos.norm1() + neg.norm1() <= 1e-33 {
            return Ok(unreduce(k, y, Scaled::new(sum.to_complex()) / Scaled::real(euler(q, policy)?), q));
        }
    }
    Err(QError::NonConvergent { what: "theta bilateral sum", terms: policy.max_terms })
}

/// Complex number with double-double parts.
#[derive(Clone, Copy)]
struct Dd {
    re: TwoFloat,
    im: TwoFloat,
}

impl Dd {
    fn new(z: Complex64) -> Dd {
        Dd { re: TwoFloat::from(z.re), im: TwoFloat::from(z.im) }
    }

    fn one() -> Dd {
        Dd::new(Complex64::new(1.0, 0.0))
    }

    fn add(self, o: Dd) -> Dd {
        Dd { re: self.re + o.re, im: self.im + o.im }
    }

    fn mul(self, o: Dd) -> Dd {
        Dd { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }

    fn scale(self, c: TwoFloat) -> Dd {
        Dd { re: self.re * c, im: self.im * c }
    }

    /// 1 / self. TwoFloat's own division is only good to double
    /// precision, so the reciprocal takes one Newton step instead.
    fn recip(self) -> Dd {
        let d = self.re * self.re + self.im * self.im;
        let r0 = TwoFloat::from(1.0 / d.hi());
        let r = r0 + r0 * (TwoFloat::from(1.0) - d * r0);
        Dd { re: self.re * r, im: -self.im * r }
    }

    fn norm1(&self) -> f64 {
        self.re.hi().abs() + self.im.hi().abs()
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(f64::from(self.re), f64::from(self.im))
    }
}

/// (k, y) with x = q^k y and q < |y| <= 1.
fn reduce(x: Complex64, q: QBase) -> (i64, Complex64) {
    let k = (x.norm().ln() / q.value().ln()).floor() as i64;
    if k == 0 {
        return (0, x);
    }
    (k, (Scaled::new(x) * q.pow_scaled(-k)).to_complex())
}

/// theta(q^k y) = (-1)^k y^-k q^{-k(k-1)/2} theta(y).
fn unreduce(k: i64, y: Complex64, base: Scaled, q: QBase) -> Scaled {
    if k == 0 {
        return base;
    }
    let v = Scaled::powi(y, -k) * q.pow_scaled(-(k * (k - 1) / 2)) * base;
    if k % 2 == 0 {
        v
    } else {
        -v
    }
}

/// theta_q(x) with x first moved into the annulus q < |y| <= 1 by the
/// quasi-periodicity theta(q^k y) = (-1)^k y^-k q^{-k(k-1)/2} theta(y).
/// Cost is independent of |x|.
pub(crate) fn theta_scaled(x: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Scaled> {
    check_arg(x)?;
    let (k, y) = reduce(x, q);
    Ok(unreduce(k, y, theta_product(y, q, policy)?, q))
}
