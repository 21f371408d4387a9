//! Command-line front end for qspectra: spectra, eigenvectors, measures and
//! identity-residual reports as JSON, plus CSV grids for plotting.

pub mod args;
mod commands;
pub mod config;
pub mod report;

use config::{OutputFormat, RunConfig};
use qspectra::QError;
use report::ReportEnvelope;
use std::io::Write;
use std::time::Instant;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters outside an operation's domain. Exit 2.
    Usage(String),
    /// A computation failed; `identity` names what was being evaluated. Exit 1.
    Numerical { identity: String, message: String },
    Io(std::io::Error),
}

impl CliError {
    /// Library errors that describe the input are usage errors; the rest are
    /// numerical failures of the named operation.
    pub(crate) fn from_library(what: &str, e: QError) -> Self {
        match e {
            QError::Domain(_) | QError::InvalidParameter(_) | QError::EmptySpectrum { .. } | QError::WindowTooSmall { .. } => {
                CliError::Usage(format!("{what}: {e}"))
            }
            _ => CliError::Numerical { identity: what.to_string(), message: e.to_string() },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical { .. } | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Numerical { identity, message } => write!(f, "numerical failure in {identity}: {message}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Runs one validated config. The CSV text is present for density grids.
pub fn execute(config: &RunConfig) -> Result<(ReportEnvelope, Option<String>), CliError> {
    config.validate().map_err(CliError::Usage)?;
    let start = Instant::now();
    let out = commands::dispatch(config)?;
    let envelope = ReportEnvelope {
        tool_version: TOOL_VERSION.to_string(),
        config: config.clone(),
        results: out.results,
        residuals: out.families.iter().map(|f| f.summary()).collect(),
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    Ok((envelope, out.csv))
}

/// Executes and writes the report (or the CSV grid) to the configured output,
/// stdout by default.
pub fn run(config: &RunConfig) -> Result<ReportEnvelope, CliError> {
    let (envelope, csv) = execute(config)?;
    let text = match (config.format, csv) {
        (OutputFormat::Csv, Some(csv)) => csv,
        _ => serde_json::to_string_pretty(&envelope).expect("report serializes") + "\n",
    };
    match &config.output {
        Some(path) => std::fs::write(path, text).map_err(CliError::Io)?,
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(CliError::Io)?,
    }
    Ok(envelope)
}
