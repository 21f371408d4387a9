//! The JSON report envelope and residual bookkeeping.

use crate::config::RunConfig;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub family: String,
    pub count: usize,
    pub max: f64,
    pub mean: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub tool_version: String,
    pub config: RunConfig,
    pub results: serde_json::Value,
    pub residuals: Vec<ResidualSummary>,
    pub wall_time_ms: u64,
}

impl ReportEnvelope {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|r| r.passed)
    }

    /// Families whose maximum exceeds the tolerance.
    pub fn failures(&self) -> impl Iterator<Item = &ResidualSummary> {
        self.residuals.iter().filter(|r| !r.passed)
    }
}

/// Residuals of one identity family, checked against one tolerance.
#[derive(Clone, Debug)]
pub struct Family {
    name: String,
    tolerance: f64,
    values: Vec<f64>,
}

impl Family {
    pub fn new(name: &str, tolerance: f64) -> Self {
        Family { name: name.to_string(), tolerance, values: Vec::new() }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Records a residual and hands it back for the per-result entry.
    pub fn push(&mut self, r: f64) -> f64 {
        self.values.push(r);
        r
    }

    pub fn summary(&self) -> ResidualSummary {
        let finite = self.values.iter().all(|v| v.is_finite());
        let max = self.values.iter().cloned().fold(0.0, f64::max);
        let mean = if self.values.is_empty() { 0.0 } else { self.values.iter().sum::<f64>() / self.values.len() as f64 };
        ResidualSummary {
            family: self.name.clone(),
            count: self.values.len(),
            // NaN never reaches JSON; a non-finite residual fails the family
            max: if finite { max } else { f64::MAX },
            mean: if finite { mean } else { f64::MAX },
            tolerance: self.tolerance,
            passed: finite && max <= self.tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_summary() {
        let mut f = Family::new("x", 1e-3);
        f.push(1e-4);
        f.push(3e-4);
        let s = f.summary();
        assert_eq!(s.count, 2);
        assert_eq!(s.max, 3e-4);
        assert!((s.mean - 2e-4).abs() < 1e-18);
        assert!(s.passed);
        f.push(f64::NAN);
        assert!(!f.summary().passed);
    }
}
