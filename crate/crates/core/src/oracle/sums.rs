//! Direct summation with a certified geometric tail bound.

use crate::error::{QError, Result};
use crate::qkernel::SeriesPolicy;
use num_complex::Complex64;
use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumRange {
    /// n = start, start + 1, ...
    From(i64),
    /// n in Z, grown symmetrically around 0.
    Bilateral,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailSum {
    pub value: Complex64,
    /// Upper bound on the modulus of the omitted tails.
    pub bound: f64,
    /// Sum of the moduli of the included terms.
    pub abs_sum: f64,
    pub terms: usize,
    /// First and last included index.
    pub span: (i64, i64),
}

/// Recent moduli on one side; the largest of the last three is the envelope
/// used in the tail estimate, so an accidental near-zero term cannot end
/// the sum.
struct Side {
    recent: VecDeque<f64>,
    tail: f64,
}

/// Moduli kept per side; enough for five two-step ratios.
const HISTORY: usize = 7;

impl Side {
    fn new() -> Self {
        Side { recent: VecDeque::with_capacity(HISTORY + 1), tail: f64::INFINITY }
    }

    /// Per-step ratio read off the history: the largest square root of a
    /// two-step ratio (two steps so that parity oscillations are covered),
    /// with a safety factor.
    fn observed_ratio(&self) -> f64 {
        if self.recent.len() < HISTORY {
            return f64::INFINITY;
        }
        let m: Vec<f64> = self.recent.iter().cloned().collect();
        let mut r = 0.0f64;
        for j in 2..m.len() {
            let ratio = if m[j - 2] > 0.0 {
                (m[j] / m[j - 2]).sqrt()
            } else if m[j] == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            r = r.max(ratio);
        }
        1.25 * r
    }

    fn record(&mut self, modulus: f64, given: Option<f64>) {
        if self.recent.len() == HISTORY {
            self.recent.pop_front();
        }
        self.recent.push_back(modulus);
        let r = given.unwrap_or_else(|| self.observed_ratio());
        let env = self.recent.iter().rev().take(3).cloned().fold(0.0, f64::max);
        self.tail = if (0.0..1.0).contains(&r) { env * r / (1.0 - r) } else { f64::INFINITY };
    }
}

/// Sums `term` over `range`. `ratio_bound(n)` must bound
/// |term(n + s)| / |term(n)| for every later step in the outward direction
/// s = sign(n) (s = +1 for one-sided sums); values >= 1 mean "not yet".
///
/// Stops when every open tail estimate env * r / (1 - r) is below
/// rel_tol * max(sum of |terms|, abs_floor). The moduli sum is used as the
/// reference so that sums with exact value 0 terminate as well.
pub fn tail_bounded_sum<T, R>(term: T, ratio_bound: R, range: SumRange, policy: &SeriesPolicy) -> Result<TailSum>
where
    T: Fn(i64) -> Result<Complex64>,
    R: Fn(i64) -> f64,
{
    sum_core(&term, Some(&ratio_bound), range, policy)
}

/// Like [`tail_bounded_sum`] for terms without an a-priori ratio bound:
/// the ratio is estimated from the last seven moduli on each side, so the
/// tail estimate is only as good as the terms' eventual monotone decay.
pub fn observed_tail_sum<T>(term: T, range: SumRange, policy: &SeriesPolicy) -> Result<TailSum>
where
    T: Fn(i64) -> Result<Complex64>,
{
    sum_core(&term, None, range, policy)
}

fn sum_core(
    term: &dyn Fn(i64) -> Result<Complex64>,
    ratio_bound: Option<&dyn Fn(i64) -> f64>,
    range: SumRange,
    policy: &SeriesPolicy,
) -> Result<TailSum> {
    policy.validate()?;
    let check = |_n: i64, t: Complex64| -> Result<Complex64> {
        if t.re.is_finite() && t.im.is_finite() {
            Ok(t)
        } else {
            Err(QError::Overflow("summand"))
        }
    };
    let mut value = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut terms = 0usize;
    match range {
        SumRange::From(start) => {
            let mut side = Side::new();
            let mut n = start;
            loop {
                let t = check(n, term(n)?)?;
                value += t;
                abs_sum += t.norm();
                terms += 1;
                side.record(t.norm(), ratio_bound.map(|r| r(n)));
                let reference = abs_sum.max(policy.abs_floor);
                if terms >= 3 && side.tail <= policy.rel_tol * reference {
                    return Ok(TailSum { value, bound: side.tail, abs_sum, terms, span: (start, n) });
                }
                if terms >= policy.max_terms {
                    return Err(QError::NonConvergent { what: "tail-bounded sum", terms });
                }
                n += 1;
            }
        }
        SumRange::Bilateral => {
            let t0 = check(0, term(0)?)?;
            value += t0;
            abs_sum += t0.norm();
            terms += 1;
            let mut plus = Side::new();
            let mut minus = Side::new();
            let mut n = 1i64;
            loop {
                let tp = check(n, term(n)?)?;
                let tm = check(-n, term(-n)?)?;
                value += tp + tm;
                abs_sum += tp.norm() + tm.norm();
                terms += 2;
                plus.record(tp.norm(), ratio_bound.map(|r| r(n)));
                minus.record(tm.norm(), ratio_bound.map(|r| r(-n)));
                let reference = abs_sum.max(policy.abs_floor);
                if n >= 3 && plus.tail <= policy.rel_tol * reference && minus.tail <= policy.rel_tol * reference {
                    return Ok(TailSum { value, bound: plus.tail + minus.tail, abs_sum, terms, span: (-n, n) });
                }
                if terms >= policy.max_terms {
                    return Err(QError::NonConvergent { what: "tail-bounded sum", terms });
                }
                n += 1;
            }
        }
    }
}
