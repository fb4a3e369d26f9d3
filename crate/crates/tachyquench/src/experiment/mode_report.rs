//! Per-mode table of the quench: frequencies, stability class, and the
//! class-specific diagnostics (effective temperature for stable modes,
//! growth rate for unstable ones).

use crate::lattice::unstable_mode_count;
use crate::mode::{beta_eff, classify, Stability};
use crate::output::{Cell, ExperimentResult};

use super::config::RunConfig;
use super::{output_path, write_table, RunError, RunReport};

pub(super) fn run(cfg: &RunConfig) -> Result<RunReport, RunError> {
    let spec = &cfg.spec;
    let mut columns: Vec<String> = Vec::new();
    for d in 0..spec.dims {
        columns.push(format!("n_{d}"));
    }
    for d in 0..spec.dims {
        columns.push(format!("k_{d}"));
    }
    columns.extend(["omega0", "omega_sq", "class", "beta_eff", "xi"].map(String::from));
    let mut table = ExperimentResult {
        columns,
        rows: Vec::new(),
    };

    let omega_scale = spec.omega() * spec.omega();
    let modes = spec.modes();
    let numbers = spec.mode_numbers();
    let mut unstable = 0usize;
    for (n, m) in numbers.iter().zip(&modes) {
        let mut row: Vec<Cell> = n.iter().map(|&x| Cell::Num(x as f64)).collect();
        row.extend(spec.momentum(n).iter().map(|&k| Cell::Num(k)));
        row.push(Cell::Num(m.omega0()));
        row.push(Cell::Num(m.omega_sq()));
        let class = classify(m.omega_sq(), omega_scale);
        row.push(Cell::Text(
            match class {
                Stability::Stable => "stable",
                Stability::Marginal => "marginal",
                Stability::Unstable => "unstable",
            }
            .to_string(),
        ));
        match class {
            Stability::Stable => {
                let beta = beta_eff(m.omega0(), m.omega_sq().sqrt()).map_err(RunError::from)?;
                row.push(Cell::Num(beta));
                row.push(Cell::Empty);
            }
            Stability::Marginal => {
                row.push(Cell::Empty);
                row.push(Cell::Empty);
            }
            Stability::Unstable => {
                unstable += 1;
                row.push(Cell::Empty);
                row.push(Cell::Num(m.xi()));
            }
        }
        table.push(row);
    }
    let path = output_path(cfg, "");
    write_table(&table, &path, cfg.format)?;

    let counted = unstable_mode_count(spec).map_err(RunError::from)?;
    debug_assert_eq!(counted, unstable);
    let total = modes.len();
    let mut report = RunReport::default();
    report.lines.push(format!(
        "mode-report: N = {total}, m0 = {}, m_sq_final = {}, unstable modes {counted} ({:.4}%)",
        spec.m0,
        spec.m_sq_final,
        100.0 * counted as f64 / total as f64
    ));
    report.files.push(path);
    Ok(report)
}
