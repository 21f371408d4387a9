//! Complex numbers with a detached binary exponent.
//!
//! Solutions of the two eigenvalue equations routinely multiply factors of
//! size 1e-300 by factors of size 1e+300. `Scaled` keeps the mantissa in
//! [0.5, 1) (in max-norm) and carries the exponent as an `i64`, so these
//! products stay exact up to rounding. Conversion back to `Complex64` is the
//! only place where range can be lost, and it reports that as an error.

use crate::error::{QError, Result};
use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    m: Complex64,
    e: i64,
}

/// x * 2^k without intermediate overflow of the power of two.
pub(crate) fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
        if !x.is_finite() {
            return x;
        }
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(k as i32)
}

/// Binary exponent k with a * 2^-k in [0.5, 1), for finite a > 0.
fn exponent_of(a: f64) -> i64 {
    let bits = a.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        // subnormal
        exponent_of(a * 2f64.powi(64)) - 64
    } else {
        biased - 1022
    }
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { m: Complex64::new(0.0, 0.0), e: 0 };
    pub const ONE: Scaled = Scaled { m: Complex64::new(0.5, 0.0), e: 1 };

    pub fn new(z: Complex64) -> Self {
        Scaled { m: z, e: 0 }.normalized()
    }

    pub fn real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0))
    }

    fn normalized(self) -> Self {
        let a = self.m.re.abs().max(self.m.im.abs());
        if a == 0.0 {
            return Scaled::ZERO;
        }
        if !a.is_finite() {
            return self;
        }
        let k = exponent_of(a);
        Scaled {
            m: Complex64::new(ldexp(self.m.re, -k), ldexp(self.m.im, -k)),
            e: self.e + k,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.re == 0.0 && self.m.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.m.re.is_finite() && self.m.im.is_finite()
    }

    pub fn mantissa(&self) -> Complex64 {
        self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    /// Lossy conversion: may return infinities or flush to zero.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ldexp(self.m.re, self.e), ldexp(self.m.im, self.e))
    }

    /// Conversion that refuses to produce a non-finite double.
    pub fn try_complex(&self, what: &'static str) -> Result<Complex64> {
        if !self.is_finite() {
            return Err(QError::Overflow(what));
        }
        let z = self.to_complex();
        if z.re.is_finite() && z.im.is_finite() {
            Ok(z)
        } else {
            Err(QError::Overflow(what))
        }
    }

    /// log2 |self|; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.m.norm().log2() + self.e as f64
    }

    pub fn abs(&self) -> Scaled {
        Scaled { m: Complex64::new(self.m.norm(), 0.0), e: self.e }.normalized()
    }

    /// |self| as a double, saturating to infinity or zero.
    pub fn abs_f64(&self) -> f64 {
        ldexp(self.m.norm(), self.e)
    }

    /// |self| <= factor * |other|
    pub fn abs_le(&self, factor: f64, other: &Scaled) -> bool {
        if self.is_zero() {
            return true;
        }
        if other.is_zero() || factor <= 0.0 {
            return false;
        }
        self.log2_abs() <= factor.log2() + other.log2_abs()
    }

    pub fn re_part(&self) -> Scaled {
        Scaled { m: Complex64::new(self.m.re, 0.0), e: self.e }.normalized()
    }

    pub fn im_part(&self) -> Scaled {
        Scaled { m: Complex64::new(self.m.im, 0.0), e: self.e }.normalized()
    }

    pub fn conj(&self) -> Scaled {
        Scaled { m: self.m.conj(), e: self.e }
    }

    pub fn scale(&self, c: f64) -> Scaled {
        Scaled { m: self.m * c, e: self.e }.normalized()
    }

    pub fn recip(&self) -> Scaled {
        Scaled::ONE / *self
    }

    /// z^n by repeated squaring; negative n inverts at the end.
    pub fn powi(z: Complex64, n: i64) -> Scaled {
        let mut base = Scaled::new(z);
        let mut acc = Scaled::ONE;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn powi_real(x: f64, n: i64) -> Scaled {
        Self::powi(Complex64::new(x, 0.0), n)
    }
}

impl From<Complex64> for Scaled {
    fn from(z: Complex64) -> Self {
        Scaled::new(z)
    }
}

impl From<f64> for Scaled {
    fn from(x: f64) -> Self {
        Scaled::real(x)
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled { m: self.m * rhs.m, e: self.e + rhs.e }.normalized()
    }
}

impl Mul<Complex64> for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Complex64) -> Scaled {
        self * Scaled::new(rhs)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        Scaled { m: self.m / rhs.m, e: self.e - rhs.e }.normalized()
    }
}

impl Div<Complex64> for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Complex64) -> Scaled {
        self / Scaled::new(rhs)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled { m: -self.m, e: self.e }
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, rhs: Scaled) -> Scaled {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.e >= rhs.e { (self, rhs) } else { (rhs, self) };
        let d = big.e - small.e;
        if d > 1100 {
            return big;
        }
        let shifted = Complex64::new(ldexp(small.m.re, -d), ldexp(small.m.im, -d));
        Scaled { m: big.m + shifted, e: big.e }.normalized()
    }
}

impl Sub for Scaled {
    type Output = Scaled;
    fn sub(self, rhs: Scaled) -> Scaled {
        self + (-rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_ordinary_values() {
        for &x in &[1.0, -3.5, 1e-310, 7.25e200, 0.1] {
            let s = Scaled::real(x);
            assert_eq!(s.to_complex().re, x);
        }
    }

    #[test]
    fn products_beyond_double_range() {
        let big = Scaled::real(1e300);
        let tiny = Scaled::real(1e-300);
        let p = big * big * tiny * tiny;
        assert!((p.to_complex().re - 1.0).abs() < 1e-15);
        assert!((big * big).try_complex("x").is_err());
    }

    #[test]
    fn addition_aligns_exponents() {
        let a = Scaled::real(1e200) * Scaled::real(1e200);
        let b = Scaled::real(-1e200) * Scaled::real(1e200);
        assert!((a + b).is_zero());
        let c = Scaled::real(3.0) + Scaled::real(1e-20);
        assert_eq!(c.to_complex().re, 3.0);
    }

    #[test]
    fn powers_by_squaring() {
        let p = Scaled::powi_real(0.5, 2000);
        assert_eq!(p.exponent() - 1, -2000);
        let z = Complex64::new(0.3, 0.4);
        let direct = z * z * z * z * z;
        let r = Scaled::powi(z, 5).to_complex();
        assert!((r - direct).norm() < 1e-16);
        let inv = Scaled::powi(z, -3).to_complex() * z * z * z;
        assert!((inv - 1.0).norm() < 1e-15);
    }

    #[test]
    fn magnitude_comparison() {
        let a = Scaled::real(1e-200) * Scaled::real(1e-200);
        let b = Scaled::real(1.0);
        assert!(a.abs_le(1e-14, &b));
        assert!(!b.abs_le(1e-14, &a));
        assert!((Scaled::real(-4.0).log2_abs() - 2.0).abs() < 1e-15);
    }
}
