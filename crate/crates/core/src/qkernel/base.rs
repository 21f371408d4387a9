use super::scaled::Scaled;
use crate::error::{QError, Result};
use num_complex::Complex64;

/// The nome q, strictly inside (0, 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QBase {
    q: f64,
}

impl QBase {
    pub const RECOMMENDED: (f64, f64) = (0.05, 0.95);

    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 && q < 1.0 {
            Ok(QBase { q })
        } else {
            Err(QError::InvalidParameter(format!("q = {q} is not in (0, 1)")))
        }
    }

    pub fn value(&self) -> f64 {
        self.q
    }

    /// False for q outside [0.05, 0.95]; such q are accepted but the
    /// series get long as q approaches 1.
    pub fn in_recommended_range(&self) -> bool {
        self.q >= Self::RECOMMENDED.0 && self.q <= Self::RECOMMENDED.1
    }

    /// The nome q^k, k >= 1.
    pub fn power(&self, k: u32) -> QBase {
        QBase { q: self.q.powi(k.max(1) as i32) }
    }

    pub fn sqrt(&self) -> QBase {
        QBase { q: self.q.sqrt() }
    }

    /// ln(1/q) > 0
    pub fn log_inv(&self) -> f64 {
        -self.q.ln()
    }

    pub fn pow(&self, n: i64) -> f64 {
        self.q.powi(n as i32)
    }

    pub fn pow_scaled(&self, n: i64) -> Scaled {
        Scaled::powi_real(self.q, n)
    }

    /// q^{k} with k = n(n+s)/2, s in {-1, +1}
    pub fn triangular(&self, n: i64, s: i64) -> Scaled {
        self.pow_scaled(n * (n + s) / 2)
    }

    /// Smallest k >= 0 with |x| q^k <= 1/2.
    pub fn index_below_half(&self, x: f64) -> usize {
        if x <= 0.5 {
            return 0;
        }
        ((2.0 * x).ln() / self.log_inv()).ceil().max(0.0) as usize
    }
}

/// Truncation contract for every infinite sum and product.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesPolicy {
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub max_terms: usize,
    pub consecutive_small: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy { rel_tol: 1e-14, abs_floor: 1e-300, max_terms: 10_000, consecutive_small: 3 }
    }
}

impl SeriesPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.rel_tol.is_nan() || self.rel_tol <= 0.0 || !self.rel_tol.is_finite() {
            return Err(QError::InvalidParameter(format!("rel_tol = {}", self.rel_tol)));
        }
        if self.abs_floor.is_nan() || self.abs_floor < 0.0 {
            return Err(QError::InvalidParameter(format!("abs_floor = {}", self.abs_floor)));
        }
        if self.max_terms < 8 {
            return Err(QError::InvalidParameter(format!("max_terms = {}", self.max_terms)));
        }
        if self.consecutive_small < 1 {
            return Err(QError::InvalidParameter("consecutive_small = 0".into()));
        }
        Ok(())
    }
}

/// Result of a summation: the value and the sum of the absolute values of
/// the terms. Their ratio measures the cancellation that happened.
#[derive(Clone, Copy, Debug)]
pub struct SeriesSum {
    pub value: Scaled,
    pub magnitude: Scaled,
    pub terms: usize,
}

/// Running sum that applies the consecutive-small-terms rule, but only
/// once `min_terms` terms have been seen (leading terms may vanish or grow).
pub(crate) struct Accumulator<'a> {
    policy: &'a SeriesPolicy,
    what: &'static str,
    sum: Scaled,
    magnitude: Scaled,
    count: usize,
    run: usize,
    min_terms: usize,
}

impl<'a> Accumulator<'a> {
    pub fn new(policy: &'a SeriesPolicy, what: &'static str, min_terms: usize) -> Self {
        Accumulator {
            policy,
            what,
            sum: Scaled::ZERO,
            magnitude: Scaled::ZERO,
            count: 0,
            run: 0,
            min_terms,
        }
    }

    /// Adds a term; `Ok(true)` once the series may stop.
    pub fn push(&mut self, t: Scaled) -> Result<bool> {
        if !t.is_finite() {
            return Err(QError::Overflow(self.what));
        }
        self.sum = self.sum + t;
        self.magnitude = self.magnitude + t.abs();
        self.count += 1;
        let floor = Scaled::real(self.policy.abs_floor);
        let reference = if self.sum.abs_le(1.0, &floor) { floor } else { self.sum };
        if t.abs_le(self.policy.rel_tol, &reference) {
            self.run += 1;
        } else {
            self.run = 0;
        }
        if self.count >= self.min_terms && self.run >= self.policy.consecutive_small {
            return Ok(true);
        }
        if self.count >= self.policy.max_terms {
            return Err(QError::NonConvergent { what: self.what, terms: self.count });
        }
        Ok(false)
    }

    pub fn finish(&self) -> SeriesSum {
        SeriesSum { value: self.sum, magnitude: self.magnitude, terms: self.count }
    }
}

/// Rejects NaN and infinite components.
pub fn finite(z: Complex64, what: &'static str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(QError::Overflow(what))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qbase_rejects_outside_unit_interval() {
        for &q in &[0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(QBase::new(q).is_err());
        }
        let q = QBase::new(0.97).unwrap();
        assert!(!q.in_recommended_range());
        assert!(QBase::new(0.5).unwrap().in_recommended_range());
    }

    #[test]
    fn policy_validation() {
        assert!(SeriesPolicy::default().validate().is_ok());
        let bad = SeriesPolicy { max_terms: 4, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = SeriesPolicy { consecutive_small: 0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = SeriesPolicy { rel_tol: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn accumulator_waits_for_min_terms() {
        let p = SeriesPolicy::default();
        let mut acc = Accumulator::new(&p, "test", 6);
        // zeros before the real terms must not end the sum
        for _ in 0..4 {
            assert!(!acc.push(Scaled::ZERO).unwrap());
        }
        assert!(!acc.push(Scaled::real(1.0)).unwrap());
        let mut done = false;
        for _ in 0..10 {
            done = acc.push(Scaled::real(1e-20)).unwrap();
            if done {
                break;
            }
        }
        assert!(done);
        assert!((acc.finish().value.to_complex().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn accumulator_reports_non_convergence() {
        let p = SeriesPolicy { max_terms: 20, ..Default::default() };
        let mut acc = Accumulator::new(&p, "constant", 0);
        let mut last = Ok(false);
        for _ in 0..25 {
            last = acc.push(Scaled::real(1.0));
            if last.is_err() {
                break;
            }
        }
        assert!(matches!(last, Err(QError::NonConvergent { .. })));
    }
}
