//! Command-line grammar and its translation into a [`RunConfig`].

use crate::config::{Command, OutputFormat, RunConfig, Suite, TParam, Truncation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "qspectra", version, about = "Spectra, eigenvectors and spectral measures of two q-difference Jacobi operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Base q in (0, 1).
    #[arg(long)]
    pub q: f64,
    /// Replaces the default tolerance of every residual check.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum SuiteArg {
    TripleProduct,
    Xi,
    OgRamanujan,
    OgQbessel,
    Wronskians,
    MeasureCompleteness,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum OperatorArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Subcommand, Debug)]
pub enum Sub {
    /// Point spectrum of the extension A_t.
    SpecA {
        #[command(flatten)]
        common: Common,
        /// Extension parameter: a real number or "inf".
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Index window lo:hi of each eigenvalue branch.
        #[arg(long, allow_hyphen_values = true, default_value = "-3:3")]
        window: String,
    },
    /// Point spectrum of B.
    SpecB {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        m_max: i64,
    },
    /// Eigenvector v_m of B over an index window.
    EigvecB {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        m: i64,
        #[arg(long, allow_hyphen_values = true, default_value = "-10:10")]
        window: String,
    },
    /// E_{k,l}(set) for the spectral measure of B.
    MeasureB {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        k: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        l: i64,
        /// "R" or a comma-separated union of intervals a:b.
        #[arg(long, allow_hyphen_values = true, default_value = "R")]
        set: String,
    },
    /// The AC density of E_{k,l} on a uniform phi grid, for plotting.
    DensityGrid {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        k: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        l: i64,
        /// Number of interior grid nodes.
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// Runs a named identity suite and reports its residuals.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Eigenvalues of a finite truncation.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        operator: OperatorArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true, default_value = "-20:20")]
        window: String,
        /// Seed of the inverse-iteration start vectors.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// "lo:hi" with integer ends.
pub fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("window '{s}' is not of the form lo:hi"))?;
    let lo = a.trim().parse::<i64>().map_err(|e| format!("window start '{a}': {e}"))?;
    let hi = b.trim().parse::<i64>().map_err(|e| format!("window end '{b}': {e}"))?;
    if lo > hi {
        return Err(format!("window {lo}:{hi} is empty"));
    }
    Ok((lo, hi))
}

/// A real number, or "inf" for the point at infinity.
pub fn parse_t(s: &str) -> Result<TParam, String> {
    match s.trim() {
        "inf" | "infinity" | "Inf" => Ok(TParam::Infinity),
        v => {
            let t = v.parse::<f64>().map_err(|e| format!("t '{v}': {e}"))?;
            if t.is_finite() {
                Ok(TParam::Finite(t))
            } else {
                Err(format!("t '{v}' must be finite or spelled 'inf'"))
            }
        }
    }
}

/// "R" or "a:b,c:d".
pub fn parse_set(s: &str) -> Result<Option<Vec<(f64, f64)>>, String> {
    if s.trim() == "R" {
        return Ok(None);
    }
    s.split(',')
        .map(|part| {
            let (a, b) = part.split_once(':').ok_or_else(|| format!("interval '{part}' is not of the form a:b"))?;
            let lo = a.trim().parse::<f64>().map_err(|e| format!("interval start '{a}': {e}"))?;
            let hi = b.trim().parse::<f64>().map_err(|e| format!("interval end '{b}': {e}"))?;
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(format!("interval {lo}:{hi} is not a bounded interval"));
            }
            Ok((lo, hi))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, String> {
        let (command, common) = match self.command {
            Sub::SpecA { common, t, window } => (Command::SpecA { t: parse_t(&t)?, window: parse_window(&window)? }, common),
            Sub::SpecB { common, alpha, m_max } => (Command::SpecB { alpha, m_max }, common),
            Sub::EigvecB { common, alpha, m, window } => (Command::EigvecB { alpha, m, window: parse_window(&window)? }, common),
            Sub::MeasureB { common, alpha, k, l, set } => (Command::MeasureB { alpha, k, l, set: parse_set(&set)? }, common),
            Sub::DensityGrid { common, alpha, k, l, grid } => (Command::DensityGrid { alpha, k, l, grid }, common),
            Sub::Verify { common, suite, alpha } => {
                let suite = match suite {
                    SuiteArg::TripleProduct => Suite::TripleProduct,
                    SuiteArg::Xi => Suite::Xi,
                    SuiteArg::OgRamanujan => Suite::OgRamanujan,
                    SuiteArg::OgQbessel => Suite::OgQbessel,
                    SuiteArg::Wronskians => Suite::Wronskians,
                    SuiteArg::MeasureCompleteness => Suite::MeasureCompleteness,
                };
                (Command::Verify { suite, alpha }, common)
            }
            Sub::Oracle { common, operator, alpha, window, seed } => {
                let operator = match operator {
                    OperatorArg::A => Truncation::A,
                    OperatorArg::B => Truncation::B,
                };
                (Command::Oracle { operator, alpha, window: parse_window(&window)?, seed }, common)
            }
        };
        let format = match common.format {
            Some(FormatArg::Json) => OutputFormat::Json,
            Some(FormatArg::Csv) => OutputFormat::Csv,
            None if matches!(command, Command::DensityGrid { .. }) => OutputFormat::Csv,
            None => OutputFormat::Json,
        };
        let config = RunConfig { command, q: common.q, tolerance: common.tol, output: common.output, format };
        config.validate()?;
        Ok(config)
    }
}
