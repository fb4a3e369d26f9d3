//! Experiment configuration: built-in desk/paper defaults overlaid by a
//! flat JSON config file.
//!
//! The config object carries the lattice keys (`dims`, `sites_per_dim`,
//! `spacing`, `omega`, `m0`, `m_sq_final`, `deep_quench`) next to the
//! experiment-specific ones; unknown keys are rejected with the key
//! name, as are keys that belong to a different experiment.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde_json::Value;

use crate::lattice::QuenchSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Lightcone,
    EeGrowth,
    MiContour,
    MiCuts,
    LrCheck,
    ModeReport,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Lightcone => "lightcone",
            ExperimentKind::EeGrowth => "ee-growth",
            ExperimentKind::MiContour => "mi-contour",
            ExperimentKind::MiCuts => "mi-cuts",
            ExperimentKind::LrCheck => "lr-check",
            ExperimentKind::ModeReport => "mode-report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("format must be `csv` or `json`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LightconeParams {
    pub ct_max: f64,
    pub t_steps: usize,
    pub r_max: i64,
    /// When set, gate the run on the out-of-cone suppression ratio.
    pub suppression_tolerance: Option<f64>,
    pub cone_pad_sites: f64,
}

#[derive(Debug, Clone)]
pub struct EeGrowthParams {
    pub blocks: Vec<usize>,
    pub m_sq_values: Vec<f64>,
    pub mt_max: f64,
    pub t_steps: usize,
    pub fit_window_mt: (f64, f64),
    /// When set, gate the run on |slope/(2|m|L) - 1|.
    pub slope_tolerance: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct MiContourParams {
    pub block_size: usize,
    pub r_min: i64,
    pub r_max: i64,
    pub r_step: i64,
    pub ct_max: f64,
    pub t_steps: usize,
}

#[derive(Debug, Clone)]
pub struct MiCutsParams {
    pub block_size: usize,
    pub separations: Vec<i64>,
    pub ct_max: f64,
    pub ct_step: f64,
    pub onset_threshold: f64,
    pub onset_window_sites: (f64, f64),
    /// Separations whose onset is gated against the window (others are
    /// reported only).
    pub onset_check_separations: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct LrCheckParams {
    pub cone_fractions: Vec<f64>,
    pub min_envelope: f64,
}

#[derive(Debug, Clone)]
pub enum ExperimentParams {
    Lightcone(LightconeParams),
    EeGrowth(EeGrowthParams),
    MiContour(MiContourParams),
    MiCuts(MiCutsParams),
    LrCheck(LrCheckParams),
    ModeReport,
}

/// A fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub kind: ExperimentKind,
    pub spec: QuenchSpec,
    pub params: ExperimentParams,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// Advisory notes gathered while validating (deep-quench margins).
    pub warnings: Vec<String>,
}

fn default_spec(kind: ExperimentKind, paper_scale: bool) -> QuenchSpec {
    let n = if paper_scale { 40_000 + 1 } else { 2001 };
    let base = |m0: f64, m_sq_final: f64, deep| QuenchSpec {
        dims: 1,
        sites_per_dim: vec![n],
        spacing: 1.0,
        omega: None,
        m0,
        m_sq_final,
        deep_quench: deep,
    };
    match kind {
        ExperimentKind::Lightcone => base(1000.0, -1.0, true),
        ExperimentKind::EeGrowth => base(1000.0, -0.25, true),
        ExperimentKind::MiContour | ExperimentKind::MiCuts => base(1000.0, -4.0, true),
        ExperimentKind::ModeReport => base(1000.0, -1.0, false),
        ExperimentKind::LrCheck => QuenchSpec {
            dims: 1,
            sites_per_dim: vec![41],
            spacing: 1.0,
            omega: Some(5.0),
            m0: 1.0,
            m_sq_final: 1.0,
            deep_quench: false,
        },
    }
}

fn default_params(kind: ExperimentKind, paper_scale: bool) -> ExperimentParams {
    match kind {
        ExperimentKind::Lightcone => ExperimentParams::Lightcone(LightconeParams {
            ct_max: if paper_scale { 10_000.0 } else { 200.0 },
            t_steps: if paper_scale { 51 } else { 41 },
            r_max: if paper_scale { 20_000 } else { 1000 },
            suppression_tolerance: None,
            cone_pad_sites: 10.0,
        }),
        ExperimentKind::EeGrowth => ExperimentParams::EeGrowth(EeGrowthParams {
            blocks: if paper_scale { vec![1, 10] } else { vec![1, 3] },
            m_sq_values: vec![-0.1, -0.2, -0.3, -0.4, -0.5],
            mt_max: 10.0,
            t_steps: 61,
            fit_window_mt: (6.0, 10.0),
            slope_tolerance: None,
        }),
        ExperimentKind::MiContour => ExperimentParams::MiContour(MiContourParams {
            block_size: 3,
            r_min: 5,
            r_max: if paper_scale { 150 } else { 120 },
            r_step: 5,
            ct_max: if paper_scale { 150.0 } else { 120.0 },
            t_steps: 61,
        }),
        ExperimentKind::MiCuts => ExperimentParams::MiCuts(MiCutsParams {
            block_size: 3,
            separations: vec![30, 60, 90, 120],
            ct_max: 160.0,
            ct_step: 0.25,
            onset_threshold: 1e-4,
            onset_window_sites: (-3.0, 5.0),
            onset_check_separations: vec![30, 60],
        }),
        ExperimentKind::LrCheck => ExperimentParams::LrCheck(LrCheckParams {
            cone_fractions: vec![0.3, 0.5, 0.7, 0.9],
            min_envelope: 1e-11,
        }),
        ExperimentKind::ModeReport => ExperimentParams::ModeReport,
    }
}

const SPEC_KEYS: &[&str] =
    &["dims", "sites_per_dim", "spacing", "omega", "m0", "m_sq_final", "deep_quench"];

fn experiment_keys(kind: ExperimentKind) -> &'static [&'static str] {
    match kind {
        ExperimentKind::Lightcone => {
            &["ct_max", "t_steps", "r_max", "suppression_tolerance", "cone_pad_sites"]
        }
        ExperimentKind::EeGrowth => {
            &["blocks", "m_sq_values", "mt_max", "t_steps", "fit_window_mt", "slope_tolerance"]
        }
        ExperimentKind::MiContour => &["block_size", "r_min", "r_max", "r_step", "ct_max", "t_steps"],
        ExperimentKind::MiCuts => &[
            "block_size",
            "separations",
            "ct_max",
            "ct_step",
            "onset_threshold",
            "onset_window_sites",
            "onset_check_separations",
        ],
        ExperimentKind::LrCheck => &["cone_fractions", "min_envelope"],
        ExperimentKind::ModeReport => &[],
    }
}

struct Fields<'a> {
    kind: ExperimentKind,
    map: &'a BTreeMap<String, Value>,
}

impl Fields<'_> {
    fn f64(&self, key: &str, default: f64) -> Result<f64, String> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v.as_f64().ok_or_else(|| format!("config key `{key}`: expected a number")),
        }
    }

    fn usize(&self, key: &str, default: usize) -> Result<usize, String> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| format!("config key `{key}`: expected a nonnegative integer")),
        }
    }

    fn f64_opt(&self, key: &str, default: Option<f64>) -> Result<Option<f64>, String> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| format!("config key `{key}`: expected a number")),
        }
    }

    fn i64(&self, key: &str, default: i64) -> Result<i64, String> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v.as_i64().ok_or_else(|| format!("config key `{key}`: expected an integer")),
        }
    }

    fn f64_list(&self, key: &str, default: Vec<f64>) -> Result<Vec<f64>, String> {
        match self.map.get(key) {
            None => Ok(default),
            Some(Value::Array(items)) if !items.is_empty() => items
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| format!("config key `{key}`: expected numbers")))
                .collect(),
            Some(_) => Err(format!("config key `{key}`: expected a nonempty array of numbers")),
        }
    }

    fn usize_list(&self, key: &str, default: Vec<usize>) -> Result<Vec<usize>, String> {
        match self.map.get(key) {
            None => Ok(default),
            Some(Value::Array(items)) if !items.is_empty() => items
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|n| n as usize)
                        .ok_or_else(|| format!("config key `{key}`: expected positive integers"))
                })
                .collect(),
            Some(_) => Err(format!("config key `{key}`: expected a nonempty array of integers")),
        }
    }

    fn i64_list(&self, key: &str, default: Vec<i64>) -> Result<Vec<i64>, String> {
        match self.map.get(key) {
            None => Ok(default),
            Some(Value::Array(items)) if !items.is_empty() => items
                .iter()
                .map(|v| v.as_i64().ok_or_else(|| format!("config key `{key}`: expected integers")))
                .collect(),
            Some(_) => Err(format!("config key `{key}`: expected a nonempty array of integers")),
        }
    }

    fn pair(&self, key: &str, default: (f64, f64)) -> Result<(f64, f64), String> {
        match self.map.get(key) {
            None => Ok(default),
            Some(Value::Array(items)) if items.len() == 2 => {
                let a = items[0]
                    .as_f64()
                    .ok_or_else(|| format!("config key `{key}`: expected two numbers"))?;
                let b = items[1]
                    .as_f64()
                    .ok_or_else(|| format!("config key `{key}`: expected two numbers"))?;
                Ok((a, b))
            }
            Some(_) => Err(format!("config key `{key}`: expected a two-element array")),
        }
    }

    fn err(&self, msg: &str) -> String {
        format!("experiment `{}`: {msg}", self.kind.name())
    }
}

fn parse_params(
    kind: ExperimentKind,
    fields: &Fields,
    paper_scale: bool,
) -> Result<ExperimentParams, String> {
    let defaults = default_params(kind, paper_scale);
    let params = match (kind, defaults) {
        (ExperimentKind::Lightcone, ExperimentParams::Lightcone(d)) => {
            let p = LightconeParams {
                ct_max: fields.f64("ct_max", d.ct_max)?,
                t_steps: fields.usize("t_steps", d.t_steps)?,
                r_max: fields.i64("r_max", d.r_max)?,
                suppression_tolerance: fields.f64_opt("suppression_tolerance", d.suppression_tolerance)?,
                cone_pad_sites: fields.f64("cone_pad_sites", d.cone_pad_sites)?,
            };
            if p.ct_max <= 0.0 {
                return Err(fields.err("ct_max must be positive"));
            }
            if p.t_steps < 2 {
                return Err(fields.err("t_steps must be at least 2"));
            }
            if p.r_max < 1 {
                return Err(fields.err("r_max must be at least 1"));
            }
            ExperimentParams::Lightcone(p)
        }
        (ExperimentKind::EeGrowth, ExperimentParams::EeGrowth(d)) => {
            let p = EeGrowthParams {
                blocks: fields.usize_list("blocks", d.blocks)?,
                m_sq_values: fields.f64_list("m_sq_values", d.m_sq_values)?,
                mt_max: fields.f64("mt_max", d.mt_max)?,
                t_steps: fields.usize("t_steps", d.t_steps)?,
                fit_window_mt: fields.pair("fit_window_mt", d.fit_window_mt)?,
                slope_tolerance: fields.f64_opt("slope_tolerance", d.slope_tolerance)?,
            };
            if p.blocks.contains(&0) {
                return Err(fields.err("blocks must be positive"));
            }
            if p.m_sq_values.iter().any(|&m| m >= 0.0) {
                return Err(fields.err("m_sq_values must be negative (tachyonic quench)"));
            }
            if !(p.fit_window_mt.0 >= 0.0
                && p.fit_window_mt.0 < p.fit_window_mt.1
                && p.fit_window_mt.1 <= p.mt_max)
            {
                return Err(fields.err("fit_window_mt must be increasing and inside [0, mt_max]"));
            }
            if p.t_steps < 2 {
                return Err(fields.err("t_steps must be at least 2"));
            }
            ExperimentParams::EeGrowth(p)
        }
        (ExperimentKind::MiContour, ExperimentParams::MiContour(d)) => {
            let p = MiContourParams {
                block_size: fields.usize("block_size", d.block_size)?,
                r_min: fields.i64("r_min", d.r_min)?,
                r_max: fields.i64("r_max", d.r_max)?,
                r_step: fields.i64("r_step", d.r_step)?,
                ct_max: fields.f64("ct_max", d.ct_max)?,
                t_steps: fields.usize("t_steps", d.t_steps)?,
            };
            if p.block_size == 0 {
                return Err(fields.err("block_size must be positive"));
            }
            if p.r_min <= p.block_size as i64 {
                return Err(fields.err("r_min must exceed block_size (disjoint blocks)"));
            }
            if p.r_step < 1 || p.r_max < p.r_min || p.t_steps < 2 || p.ct_max <= 0.0 {
                return Err(fields.err("invalid r grid or time grid"));
            }
            ExperimentParams::MiContour(p)
        }
        (ExperimentKind::MiCuts, ExperimentParams::MiCuts(d)) => {
            let p = MiCutsParams {
                block_size: fields.usize("block_size", d.block_size)?,
                separations: fields.i64_list("separations", d.separations)?,
                ct_max: fields.f64("ct_max", d.ct_max)?,
                ct_step: fields.f64("ct_step", d.ct_step)?,
                onset_threshold: fields.f64("onset_threshold", d.onset_threshold)?,
                onset_window_sites: fields.pair("onset_window_sites", d.onset_window_sites)?,
                onset_check_separations: fields
                    .i64_list("onset_check_separations", d.onset_check_separations)?,
            };
            if p.block_size == 0 {
                return Err(fields.err("block_size must be positive"));
            }
            if p.separations.iter().any(|&r| r <= p.block_size as i64) {
                return Err(fields.err("separations must exceed block_size"));
            }
            if !(p.ct_step > 0.0 && p.ct_max > p.ct_step) {
                return Err(fields.err("need 0 < ct_step < ct_max"));
            }
            if p.onset_threshold <= 0.0 {
                return Err(fields.err("onset_threshold must be positive"));
            }
            for r in &p.onset_check_separations {
                if !p.separations.contains(r) {
                    return Err(fields.err("onset_check_separations must be a subset of separations"));
                }
            }
            ExperimentParams::MiCuts(p)
        }
        (ExperimentKind::LrCheck, ExperimentParams::LrCheck(d)) => {
            let p = LrCheckParams {
                cone_fractions: fields.f64_list("cone_fractions", d.cone_fractions)?,
                min_envelope: fields.f64("min_envelope", d.min_envelope)?,
            };
            if p.cone_fractions.iter().any(|&x| !(0.0 < x && x < 1.0)) {
                return Err(fields.err("cone_fractions must lie in (0, 1)"));
            }
            ExperimentParams::LrCheck(p)
        }
        (ExperimentKind::ModeReport, _) => ExperimentParams::ModeReport,
        _ => unreachable!("defaults match their kind"),
    };
    Ok(params)
}

/// Resolve a run configuration from built-in defaults, an optional flat
/// JSON config text, and command-line overrides.
pub fn resolve(
    kind: ExperimentKind,
    config_text: Option<&str>,
    paper_scale: bool,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
) -> Result<RunConfig, String> {
    let mut map: BTreeMap<String, Value> = BTreeMap::new();
    if let Some(text) = config_text {
        let value: Value =
            serde_json::from_str(text).map_err(|e| format!("config is not valid JSON: {e}"))?;
        let Value::Object(obj) = value else {
            return Err("config must be a JSON object".into());
        };
        map.extend(obj);
    }

    // Route every key: spec, common, or experiment-specific.
    let allowed = experiment_keys(kind);
    let mut spec_overrides = serde_json::Map::new();
    let mut file_out: Option<PathBuf> = None;
    let mut file_format: Option<OutputFormat> = None;
    for (key, value) in &map {
        if SPEC_KEYS.contains(&key.as_str()) {
            spec_overrides.insert(key.clone(), value.clone());
        } else if key == "experiment" {
            let name = value
                .as_str()
                .ok_or_else(|| "config key `experiment`: expected a string".to_string())?;
            if name != kind.name() {
                return Err(format!(
                    "config is for experiment `{name}` but `{}` was requested",
                    kind.name()
                ));
            }
        } else if key == "out" {
            let path =
                value.as_str().ok_or_else(|| "config key `out`: expected a path string".to_string())?;
            file_out = Some(PathBuf::from(path));
        } else if key == "format" {
            let s = value
                .as_str()
                .ok_or_else(|| "config key `format`: expected a string".to_string())?;
            file_format = Some(s.parse()?);
        } else if !allowed.contains(&key.as_str()) {
            return Err(format!("unknown config key `{key}` for experiment `{}`", kind.name()));
        }
    }

    // Spec: defaults overlaid by config keys.
    let mut spec_value =
        serde_json::to_value(default_spec(kind, paper_scale)).expect("spec serializes");
    let Value::Object(spec_map) = &mut spec_value else { unreachable!() };
    for (k, v) in spec_overrides {
        spec_map.insert(k, v);
    }
    let spec: QuenchSpec =
        serde_json::from_value(spec_value).map_err(|e| format!("invalid spec in config: {e}"))?;
    let warnings = spec.validate().map_err(|e| format!("invalid spec: {e}"))?;

    let fields = Fields { kind, map: &map };
    let params = parse_params(kind, &fields, paper_scale)?;

    Ok(RunConfig {
        kind,
        spec,
        params,
        out: out.or(file_out),
        format: format.or(file_format).unwrap_or_default(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        for kind in [
            ExperimentKind::Lightcone,
            ExperimentKind::EeGrowth,
            ExperimentKind::MiContour,
            ExperimentKind::MiCuts,
            ExperimentKind::LrCheck,
            ExperimentKind::ModeReport,
        ] {
            let cfg = resolve(kind, None, false, None, None).unwrap();
            assert_eq!(cfg.kind, kind);
            assert_eq!(cfg.format, OutputFormat::Csv);
        }
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err =
            resolve(ExperimentKind::Lightcone, Some(r#"{"separations": [1]}"#), false, None, None)
                .unwrap_err();
        assert!(err.contains("separations"), "{err}");
        assert!(err.contains("lightcone"), "{err}");
    }

    #[test]
    fn spec_keys_overlay_defaults() {
        let cfg = resolve(
            ExperimentKind::Lightcone,
            Some(r#"{"sites_per_dim": 401, "m_sq_final": -4.0}"#),
            false,
            None,
            None,
        )
        .unwrap();
        assert_eq!(cfg.spec.total_sites(), 401);
        assert_eq!(cfg.spec.m_sq_final, -4.0);
        assert_eq!(cfg.spec.m0, 1000.0); // untouched default
    }

    #[test]
    fn experiment_name_mismatch() {
        let err = resolve(
            ExperimentKind::Lightcone,
            Some(r#"{"experiment": "mi-cuts"}"#),
            false,
            None,
            None,
        )
        .unwrap_err();
        assert!(err.contains("mi-cuts"), "{err}");
    }

    #[test]
    fn field_type_errors_name_the_key() {
        let err = resolve(ExperimentKind::EeGrowth, Some(r#"{"blocks": "three"}"#), false, None, None)
            .unwrap_err();
        assert!(err.contains("`blocks`"), "{err}");
        let err = resolve(
            ExperimentKind::EeGrowth,
            Some(r#"{"fit_window_mt": [8.0, 6.0]}"#),
            false,
            None,
            None,
        )
        .unwrap_err();
        assert!(err.contains("fit_window_mt"), "{err}");
    }

    #[test]
    fn tachyonic_guard_on_ee_growth() {
        let err = resolve(
            ExperimentKind::EeGrowth,
            Some(r#"{"m_sq_values": [0.25]}"#),
            false,
            None,
            None,
        )
        .unwrap_err();
        assert!(err.contains("negative"), "{err}");
    }

    #[test]
    fn paper_scale_defaults() {
        let cfg = resolve(ExperimentKind::Lightcone, None, true, None, None).unwrap();
        assert_eq!(cfg.spec.total_sites(), 40_001);
        match cfg.params {
            ExperimentParams::Lightcone(p) => assert_eq!(p.r_max, 20_000),
            _ => panic!(),
        }
    }
}
