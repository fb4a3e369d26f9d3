use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tachyquench::experiment::{self, config, ExperimentKind, OutputFormat, RunError};

/// Quench a free bosonic lattice into a tachyonic mass regime and
/// reproduce its post-quench observables: correlator light cones,
/// entanglement-entropy growth, mutual-information spreading, mode
/// diagnostics and Lieb-Robinson causality checks.
#[derive(Parser)]
#[command(name = "tachyquench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Correlator density map over (r, t) with a causal-suppression gate.
    Lightcone(RunArgs),
    /// Entanglement-entropy growth of site blocks with slope fits.
    EeGrowth(RunArgs),
    /// Mutual information contour over separation and time.
    MiContour(RunArgs),
    /// Mutual information at fixed separations with onset checks.
    MiCuts(RunArgs),
    /// Exact commutators vs the Lieb-Robinson envelope bound.
    LrCheck(RunArgs),
    /// Table of per-mode frequencies, stability and diagnostics.
    ModeReport(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat JSON config file (lattice keys plus experiment fields).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Use the figure-caption parameters (N = 40001) instead of the
    /// fast desk-scale defaults (N = 2001).
    #[arg(long)]
    paper_scale: bool,
    /// Output file path (experiments with several tables add suffixes).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Lightcone(a) => (ExperimentKind::Lightcone, a),
        Command::EeGrowth(a) => (ExperimentKind::EeGrowth, a),
        Command::MiContour(a) => (ExperimentKind::MiContour, a),
        Command::MiCuts(a) => (ExperimentKind::MiCuts, a),
        Command::LrCheck(a) => (ExperimentKind::LrCheck, a),
        Command::ModeReport(a) => (ExperimentKind::ModeReport, a),
    };
    match execute(kind, args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tachyquench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(kind: ExperimentKind, args: &RunArgs) -> Result<ExitCode, RunError> {
    let config_text = match &args.config {
        None => None,
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| {
            RunError::Config(format!("cannot read config {}: {e}", path.display()))
        })?),
    };
    let format: Option<OutputFormat> = match &args.format {
        None => None,
        Some(s) => Some(s.parse().map_err(RunError::Config)?),
    };
    let cfg = config::resolve(
        kind,
        config_text.as_deref(),
        args.paper_scale,
        args.out.clone(),
        format,
    )
    .map_err(RunError::Config)?;

    let report = match thread_pool()? {
        Some(pool) => pool.install(|| experiment::run(&cfg)),
        None => experiment::run(&cfg),
    }?;

    for line in &report.lines {
        println!("{line}");
    }
    for check in &report.checks {
        println!(
            "CHECK {}: {} ({})",
            check.name,
            if check.passed { "PASS" } else { "FAIL" },
            check.detail
        );
    }
    for file in &report.files {
        println!("wrote {}", file.display());
    }
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Optional rayon pool capped by TACHYQUENCH_THREADS.
fn thread_pool() -> Result<Option<rayon::ThreadPool>, RunError> {
    match std::env::var("TACHYQUENCH_THREADS") {
        Err(_) => Ok(None),
        Ok(raw) => {
            let n: usize = raw.parse().map_err(|_| {
                RunError::Config(format!("TACHYQUENCH_THREADS must be a positive integer, got `{raw}`"))
            })?;
            if n == 0 {
                return Err(RunError::Config("TACHYQUENCH_THREADS must be positive".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| RunError::Config(format!("cannot build thread pool: {e}")))?;
            Ok(Some(pool))
        }
    }
}
