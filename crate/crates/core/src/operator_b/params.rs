use crate::error::{QError, Result};
use crate::qkernel::QBase;

/// Parameters of B: diagonal alpha q^{-n}, unit off-diagonal.
/// alpha = 0 is the free operator (pure AC spectrum [-2, 2]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BParams {
    alpha: f64,
    q: QBase,
}

impl BParams {
    pub fn new(alpha: f64, q: QBase) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(QError::InvalidParameter(format!("alpha = {alpha}")));
        }
        Ok(BParams { alpha, q })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn q(&self) -> QBase {
        self.q
    }

    pub fn is_free(&self) -> bool {
        self.alpha == 0.0
    }

    /// Delta = floor(log_q |alpha|). Within relative 1e-12 of an integer
    /// power q^k the answer is k, so that |beta| = 1 rather than q.
    pub fn delta(&self) -> Option<i64> {
        if self.is_free() {
            return None;
        }
        let a = self.alpha.abs();
        let x = a.ln() / self.q.value().ln();
        let k = x.round();
        let qk = self.q.value().powf(k);
        if (a - qk).abs() <= 1e-12 * qk {
            return Some(k as i64);
        }
        Some(x.floor() as i64)
    }

    /// beta = alpha q^{-Delta}, with q < |beta| <= 1.
    pub fn beta(&self) -> Option<f64> {
        let d = self.delta()?;
        let a = self.alpha.abs();
        let qd = self.q.value().powf(d as f64);
        let b = if (a - qd).abs() <= 1e-12 * qd { 1.0 } else { a / qd };
        Some(b.copysign(self.alpha))
    }

    pub(crate) fn require_nonfree(&self, what: &str) -> Result<i64> {
        self.delta().ok_or_else(|| QError::Domain(format!("{what} is not defined for alpha = 0")))
    }
}
