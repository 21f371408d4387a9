//! The validated description of one run.

use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TParam {
    Finite(f64),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    TripleProduct,
    Xi,
    OgRamanujan,
    OgQbessel,
    Wronskians,
    MeasureCompleteness,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::TripleProduct => "triple-product",
            Suite::Xi => "xi",
            Suite::OgRamanujan => "og-ramanujan",
            Suite::OgQbessel => "og-qbessel",
            Suite::Wronskians => "wronskians",
            Suite::MeasureCompleteness => "measure-completeness",
        }
    }

    pub fn needs_alpha(self) -> bool {
        matches!(self, Suite::OgQbessel | Suite::Wronskians | Suite::MeasureCompleteness)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncation {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    SpecA { t: TParam, window: (i64, i64) },
    SpecB { alpha: f64, m_max: i64 },
    EigvecB { alpha: f64, m: i64, window: (i64, i64) },
    /// `set = None` is the whole real line.
    MeasureB { alpha: f64, k: i64, l: i64, set: Option<Vec<(f64, f64)>> },
    DensityGrid { alpha: f64, k: i64, l: i64, grid: usize },
    Verify { suite: Suite, alpha: Option<f64> },
    Oracle { operator: Truncation, alpha: Option<f64>, window: (i64, i64), seed: Option<u64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub q: f64,
    /// Overrides the default tolerance of every residual family.
    pub tolerance: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    /// Usage-level checks; numerical preconditions are left to the library.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(format!("q = {} is not in (0, 1)", self.q));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(format!("tolerance {t} must be positive and finite"));
            }
        }
        let finite = |name: &str, v: f64| if v.is_finite() { Ok(()) } else { Err(format!("{name} = {v} is not finite")) };
        match &self.command {
            Command::SpecA { .. } => {}
            Command::SpecB { alpha, .. } | Command::EigvecB { alpha, .. } => {
                finite("alpha", *alpha)?;
                if *alpha == 0.0 {
                    return Err("alpha = 0 is the free operator, which has no point spectrum".into());
                }
            }
            Command::MeasureB { alpha, .. } => finite("alpha", *alpha)?,
            Command::DensityGrid { alpha, grid, .. } => {
                finite("alpha", *alpha)?;
                if *alpha == 0.0 {
                    return Err("the grid reports f_n, which needs alpha != 0".into());
                }
                if *grid == 0 {
                    return Err("the grid needs at least one node".into());
                }
            }
            Command::Verify { suite, alpha } => match alpha {
                Some(a) => finite("alpha", *a)?,
                None if suite.needs_alpha() => return Err(format!("suite {} needs --alpha", suite.name())),
                None => {}
            },
            Command::Oracle { operator, alpha, .. } => match alpha {
                Some(a) => finite("alpha", *a)?,
                None if *operator == Truncation::B => return Err("the B truncation needs --alpha".into()),
                None => {}
            },
        }
        if self.format == OutputFormat::Csv && !matches!(self.command, Command::DensityGrid { .. }) {
            return Err("CSV output is only available for density-grid".into());
        }
        Ok(())
    }
}
