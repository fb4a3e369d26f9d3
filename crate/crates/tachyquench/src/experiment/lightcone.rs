//! Light-cone density map of the qq correlator and its causality gate:
//! outside `r = 2 c t` (plus a few lattice sites of padding) the
//! correlator must be suppressed by the configured factor relative to
//! the in-cone maximum at the same time.

use crate::correlator::{lightcone_map, CorrelatorKind};
use crate::output::{Cell, ExperimentResult};

use super::config::{LightconeParams, RunConfig};
use super::{output_path, report_time, write_table, RunError, RunReport, ToleranceCheck};

pub(super) fn run(cfg: &RunConfig, p: &LightconeParams) -> Result<RunReport, RunError> {
    let spec = &cfg.spec;
    if spec.dims != 1 {
        return Err(RunError::Config("lightcone runs on a one-dimensional lattice".into()));
    }
    let c = spec.speed_of_light();
    let ts: Vec<f64> = (0..p.t_steps)
        .map(|i| p.ct_max * i as f64 / (p.t_steps - 1) as f64 / c)
        .collect();
    let half = (spec.total_sites() as i64 - 1) / 2;
    let r_max = p.r_max.min(half);
    let rs: Vec<i64> = (0..=r_max).collect();
    let map = lightcone_map(spec, CorrelatorKind::Qq, &ts, &rs)?;

    let mut table = ExperimentResult::new(&["r", "t", "value"]);
    for (i, &t) in ts.iter().enumerate() {
        let ct = report_time(cfg, t);
        for (j, &r) in rs.iter().enumerate() {
            table.push(vec![Cell::Num(r as f64), Cell::Num(ct), Cell::Num(map.values[i][j])]);
        }
    }
    let path = output_path(cfg, "");
    write_table(&table, &path, cfg.format)?;

    // Causality gate per time slice.
    let mut worst_ratio: f64 = 0.0;
    let mut worst_t = 0.0;
    let mut slices_checked = 0usize;
    for (i, &t) in ts.iter().enumerate() {
        if t == 0.0 {
            continue;
        }
        let cone_edge = 2.0 * c * t / spec.spacing;
        let out_start = cone_edge + p.cone_pad_sites;
        if out_start >= r_max as f64 {
            continue;
        }
        let mut in_max: f64 = 0.0;
        let mut out_max: f64 = 0.0;
        for (j, &r) in rs.iter().enumerate() {
            let v = map.values[i][j].abs();
            if (r as f64) <= cone_edge {
                in_max = in_max.max(v);
            } else if (r as f64) > out_start {
                out_max = out_max.max(v);
            }
        }
        if in_max == 0.0 {
            continue;
        }
        slices_checked += 1;
        let ratio = out_max / in_max;
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst_t = t;
        }
    }

    let mut report = RunReport::default();
    report.lines.push(format!(
        "lightcone: N = {}, m_sq_final = {}, c = {:.6}, {} time slices, r <= {}",
        spec.total_sites(),
        spec.m_sq_final,
        c,
        ts.len(),
        r_max
    ));
    report.lines.push(format!(
        "out-of-cone suppression: worst ratio {worst_ratio:.3e} at t = {:.6} ({} slices checked)",
        worst_t, slices_checked
    ));
    if let Some(tol) = p.suppression_tolerance {
        report.checks.push(ToleranceCheck::new(
            "causal suppression",
            slices_checked > 0 && worst_ratio <= tol,
            format!("worst out/in ratio {worst_ratio:.3e} vs tolerance {tol:.1e}"),
        ));
    }
    report.files.push(path);
    Ok(report)
}
