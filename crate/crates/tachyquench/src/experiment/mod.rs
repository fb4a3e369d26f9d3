//! Named, reproducible experiment runs behind the `tachyquench` CLI.
//!
//! Each experiment produces deterministic output tables plus a summary
//! with derived quantities (fitted slopes, onset times, unstable mode
//! counts) checked against configured tolerances. Re-running the same
//! configuration produces byte-identical files regardless of the rayon
//! worker count: parallelism only ever spans independent output slots.

pub mod config;
mod entropy_growth;
mod lightcone;
mod lr_check;
mod mi;
mod mode_report;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

pub use config::{ExperimentKind, ExperimentParams, OutputFormat, RunConfig};

use crate::output::ExperimentResult;

/// One tolerance gate of an experiment summary.
#[derive(Debug, Clone)]
pub struct ToleranceCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl ToleranceCheck {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Everything a finished run reports back.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub lines: Vec<String>,
    pub checks: Vec<ToleranceCheck>,
    pub files: Vec<PathBuf>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Errors of a run, mapped onto the CLI exit codes.
#[derive(Debug)]
pub enum RunError {
    /// Invalid configuration (exit code 2).
    Config(String),
    /// Numeric range failures such as kernel overflow (exit code 3).
    Numeric(crate::Error),
    /// Output I/O failure (exit code 2).
    Io(std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io(_) => 2,
            RunError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(msg) => write!(f, "config error: {msg}"),
            RunError::Numeric(e) => write!(f, "numeric range error: {e}"),
            RunError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<crate::Error> for RunError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::GrowthOverflow { .. } | crate::Error::NonFiniteResult { .. } => {
                RunError::Numeric(e)
            }
            other => RunError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

/// Run the configured experiment and write its output files.
pub fn run(cfg: &RunConfig) -> Result<RunReport, RunError> {
    let mut report = match (&cfg.kind, &cfg.params) {
        (ExperimentKind::Lightcone, ExperimentParams::Lightcone(p)) => lightcone::run(cfg, p)?,
        (ExperimentKind::EeGrowth, ExperimentParams::EeGrowth(p)) => entropy_growth::run(cfg, p)?,
        (ExperimentKind::MiContour, ExperimentParams::MiContour(p)) => mi::run_contour(cfg, p)?,
        (ExperimentKind::MiCuts, ExperimentParams::MiCuts(p)) => mi::run_cuts(cfg, p)?,
        (ExperimentKind::LrCheck, ExperimentParams::LrCheck(p)) => lr_check::run(cfg, p)?,
        (ExperimentKind::ModeReport, ExperimentParams::ModeReport) => mode_report::run(cfg)?,
        _ => return Err(RunError::Config("experiment/parameter mismatch".into())),
    };
    for w in &cfg.warnings {
        report.lines.insert(0, format!("warning: {w}"));
    }
    Ok(report)
}

/// Output path for a (possibly suffixed) table of this run.
fn output_path(cfg: &RunConfig, suffix: &str) -> PathBuf {
    let base: PathBuf = match &cfg.out {
        Some(p) => p.clone(),
        None => PathBuf::from(format!("tachyquench-{}.{}", cfg.kind.name(), cfg.format.extension())),
    };
    if suffix.is_empty() {
        return base;
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = base
        .extension()
        .and_then(|s| s.to_str())
        .unwrap_or(cfg.format.extension())
        .to_string();
    base.with_file_name(format!("{stem}-{suffix}.{ext}"))
}

fn write_table(table: &ExperimentResult, path: &Path, format: OutputFormat) -> Result<(), RunError> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    match format {
        OutputFormat::Csv => table.write_csv(&mut w)?,
        OutputFormat::Json => table.write_json(&mut w)?,
    }
    Ok(())
}

/// Times reported in units of 1/c: the dimensionless `c t / a`.
fn report_time(cfg: &RunConfig, t: f64) -> f64 {
    t * cfg.spec.speed_of_light() / cfg.spec.spacing
}

/// Format a mass-squared value for a file suffix, e.g. `-0.25` -> `m0.25n`.
fn msq_suffix(m_sq: f64) -> String {
    if m_sq < 0.0 {
        format!("msq{}n", -m_sq)
    } else {
        format!("msq{m_sq}")
    }
}
