//! Entanglement-entropy growth curves for blocks of sites across a set
//! of tachyonic masses, with the late-window slope checked against the
//! asymptotic `2 |m| L` rate.

use crate::gaussian::{entropy_growth, Region};
use crate::output::{Cell, ExperimentResult};

use super::config::{EeGrowthParams, RunConfig};
use super::{msq_suffix, output_path, report_time, write_table, RunError, RunReport, ToleranceCheck};

pub(super) fn run(cfg: &RunConfig, p: &EeGrowthParams) -> Result<RunReport, RunError> {
    let mut report = RunReport::default();
    report.lines.push(format!(
        "ee-growth: N = {}, m0 = {}, blocks {:?}, m_sq {:?}, fit window mt in [{}, {}]",
        cfg.spec.total_sites(),
        cfg.spec.m0,
        p.blocks,
        p.m_sq_values,
        p.fit_window_mt.0,
        p.fit_window_mt.1
    ));
    for &m_sq in &p.m_sq_values {
        let mut spec = cfg.spec.clone();
        spec.m_sq_final = m_sq;
        let m = (-m_sq).sqrt();
        let t_max = p.mt_max / m;
        let ts: Vec<f64> = (0..p.t_steps)
            .map(|i| t_max * i as f64 / (p.t_steps - 1) as f64)
            .collect();
        let window = (p.fit_window_mt.0 / m, p.fit_window_mt.1 / m);
        for &block in &p.blocks {
            let region = Region::block(0, block).map_err(RunError::from)?;
            let growth = entropy_growth(&spec, &region, &ts, Some(window))?;
            let mut table = ExperimentResult::new(&["t", "S"]);
            for (&t, &s) in growth.times.iter().zip(&growth.entropies) {
                table.push(vec![Cell::Num(report_time(cfg, t)), Cell::Num(s)]);
            }
            let suffix = format!("L{}-{}", block, msq_suffix(m_sq));
            let path = output_path(cfg, &suffix);
            write_table(&table, &path, cfg.format)?;
            report.files.push(path);

            let slope = growth.slope.expect("fit window was supplied");
            let target = 2.0 * m * block as f64;
            let ratio = slope / target;
            report.lines.push(format!(
                "  L = {block}, m_sq = {m_sq}: fitted slope {slope:.6} vs 2|m|L = {target:.6} (ratio {ratio:.4})"
            ));
            if let Some(tol) = p.slope_tolerance {
                report.checks.push(ToleranceCheck::new(
                    format!("slope L={block} m_sq={m_sq}"),
                    (ratio - 1.0).abs() <= tol,
                    format!("ratio {ratio:.4} within {:.0}%", tol * 100.0),
                ));
            }
        }
    }
    Ok(report)
}
