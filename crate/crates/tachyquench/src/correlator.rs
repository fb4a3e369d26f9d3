//! Real-space equal-time two-point functions after the quench.
//!
//! Each correlator is an exact finite sum over the momentum grid,
//! `(1/N) sum_k e^{ik(r-s)} C_k(t)`, with the imaginary parts cancelling
//! analytically between k and -k (only cosines are ever formed). In the
//! deep-quench regime the initial mass drops out and values are reported
//! divided by `m0`:
//!
//! ```text
//! <q_r q_s>/m0 = (1/4N) sum_k e^{ik(r-s)} (1 - cos 2 w_k t)/w_k^2
//! <p_r p_s>/m0 = (1/4N) sum_k e^{ik(r-s)} (1 + cos 2 w_k t)
//! <q_r p_s>/m0 = (1/4N) sum_k e^{ik(r-s)} sin(2 w_k t)/w_k
//! ```
//!
//! These deep forms are only accurate for separations and times large
//! compared to 1/m0; a validity warning is attached otherwise.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::least_squares_slope;
use crate::fourier::ModeSum;
use crate::lattice::QuenchSpec;
use crate::mode::{cos_deficit, cos_deficit_ratio, sine_ratio, GROWTH_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelatorKind {
    Qq,
    Pp,
    Qp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Raw correlator values.
    Bare,
    /// Values divided by the initial mass (deep-quench convention).
    PerM0,
}

/// An equal-time correlator sampled on a list of lattice displacements.
#[derive(Debug, Clone)]
pub struct CorrelatorField {
    pub kind: CorrelatorKind,
    pub t: f64,
    pub displacements: Vec<Vec<i64>>,
    pub values: Vec<f64>,
    pub normalization: Normalization,
    pub warnings: Vec<String>,
}

impl CorrelatorField {
    pub fn value(&self, delta: &[i64]) -> Option<f64> {
        self.displacements.iter().position(|d| d == delta).map(|i| self.values[i])
    }
}

/// Per-mode kernel values for one time slice, in grid order.
pub(crate) fn mode_kernels(spec: &QuenchSpec, kind: CorrelatorKind, t: f64) -> Result<Vec<f64>> {
    let modes = spec.modes();
    if spec.deep_quench {
        // Deep-quench kernels carry a 1/m0 normalization.
        let xi_t = spec.max_growth_rate() * t;
        if xi_t > GROWTH_LIMIT {
            return Err(Error::GrowthOverflow { xi_t, limit: GROWTH_LIMIT, t });
        }
        Ok(modes
            .iter()
            .map(|m| match kind {
                CorrelatorKind::Qq => cos_deficit_ratio(m.omega_sq(), t) / 4.0,
                CorrelatorKind::Pp => (2.0 - cos_deficit(m.omega_sq(), t)) / 4.0,
                CorrelatorKind::Qp => sine_ratio(m.omega_sq(), t) / 4.0,
            })
            .collect())
    } else {
        modes
            .iter()
            .map(|m| match kind {
                CorrelatorKind::Qq => m.var_qq(t),
                CorrelatorKind::Pp => m.var_pp(t),
                CorrelatorKind::Qp => m.cov_qp(t),
            })
            .collect()
    }
}

fn deep_validity_warning(spec: &QuenchSpec, t: f64, displacements: &[Vec<i64>]) -> Option<String> {
    if !spec.deep_quench {
        return None;
    }
    let scale = 1.0 / spec.m0;
    let min_sep = displacements
        .iter()
        .filter(|d| d.iter().any(|&x| x != 0))
        .map(|d| {
            let sq: f64 = d.iter().map(|&x| (x as f64 * spec.spacing).powi(2)).sum();
            sq.sqrt()
        })
        .fold(f64::INFINITY, f64::min);
    if t < scale || min_sep < scale {
        Some(format!(
            "deep-quench correlators are only valid for |r-s|, t >> 1/m0 = {scale:.3e} (t = {t}, min separation = {min_sep:.3e})"
        ))
    } else {
        None
    }
}

/// Equal-time correlator of the given kind at time `t` on a list of
/// displacements. Deterministic: modes are summed in ascending grid
/// order regardless of threading.
pub fn correlator_slice(
    spec: &QuenchSpec,
    kind: CorrelatorKind,
    t: f64,
    displacements: &[Vec<i64>],
) -> Result<CorrelatorField> {
    spec.validate()?;
    if !t.is_finite() {
        return Err(Error::NonFinite { what: "t", value: t });
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let sum = ModeSum::new(spec);
    for d in displacements {
        sum.check_displacement(d)?;
    }
    let kernels = mode_kernels(spec, kind, t)?;
    #[cfg(debug_assertions)]
    {
        let max_kernel = kernels.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        for d in displacements {
            let residual = sum.sine_residual(&kernels, d);
            debug_assert!(
                residual.abs() <= 1e-12 * max_kernel.max(1e-300),
                "imaginary residual {residual} exceeds reality tolerance"
            );
        }
    }
    let values: Vec<f64> = displacements.iter().map(|d| sum.sum(&kernels, d)).collect();
    let normalization = if spec.deep_quench { Normalization::PerM0 } else { Normalization::Bare };
    let warnings = deep_validity_warning(spec, t, displacements).into_iter().collect();
    Ok(CorrelatorField { kind, t, displacements: displacements.to_vec(), values, normalization, warnings })
}

/// Correlator values over a (time, displacement) grid on a chain.
#[derive(Debug, Clone)]
pub struct LightconeMap {
    pub kind: CorrelatorKind,
    pub ts: Vec<f64>,
    pub rs: Vec<i64>,
    /// `values[i][j]` is the correlator at `ts[i]`, displacement `rs[j]`.
    pub values: Vec<Vec<f64>>,
    pub normalization: Normalization,
}

/// Evaluate the correlator over a full (t, r) grid, reusing one kernel
/// pass per time slice. Time slices run in parallel; the output layout
/// is fixed by the input grids.
pub fn lightcone_map(
    spec: &QuenchSpec,
    kind: CorrelatorKind,
    ts: &[f64],
    rs: &[i64],
) -> Result<LightconeMap> {
    spec.validate()?;
    if spec.dims != 1 {
        return Err(Error::InvalidSpec("lightcone_map expects a one-dimensional lattice".into()));
    }
    if ts.is_empty() || rs.is_empty() {
        return Err(Error::InvalidSpec("lightcone_map needs nonempty grids".into()));
    }
    let sum = ModeSum::new(spec);
    for &r in rs {
        sum.check_displacement(&[r])?;
    }
    let values: Vec<Vec<f64>> = ts
        .par_iter()
        .map(|&t| {
            if t < 0.0 {
                return Err(Error::NegativeTime(t));
            }
            let kernels = mode_kernels(spec, kind, t)?;
            Ok(rs.iter().map(|&r| sum.sum(&kernels, &[r])).collect())
        })
        .collect::<Result<_>>()?;
    let normalization = if spec.deep_quench { Normalization::PerM0 } else { Normalization::Bare };
    Ok(LightconeMap { kind, ts: ts.to_vec(), rs: rs.to_vec(), values, normalization })
}

/// Late-time log-slope of the qq correlator at fixed displacement; for a
/// tachyonic quench it converges to twice the tachyonic mass.
pub fn asymptotic_qq_slope(spec: &QuenchSpec, r: &[i64], t_window: &[f64]) -> Result<f64> {
    if spec.m_sq_final >= 0.0 {
        return Err(Error::NotTachyonic(spec.m_sq_final));
    }
    if t_window.len() < 2 {
        return Err(Error::FitWindowTooSmall(t_window.len()));
    }
    let mut logs = Vec::with_capacity(t_window.len());
    for &t in t_window {
        let field = correlator_slice(spec, CorrelatorKind::Qq, t, std::slice::from_ref(&r.to_vec()))?;
        let v = field.values[0];
        if v <= 0.0 {
            return Err(Error::NonPositiveCorrelator { t, value: v });
        }
        logs.push(v.ln());
    }
    least_squares_slope(t_window, &logs)
}

/// First time at which the equal-point correlator sum
/// `(1/N) sum_k C_k^{qq}(t)` reaches `2 |m^2| / lambda`: a Hartree-Fock
/// estimate of when a quartic coupling of strength `lambda` would halt
/// the instability. Returns +infinity if the threshold is unreachable
/// before the overflow guard.
pub fn stability_time_estimate(spec: &QuenchSpec, lambda: f64) -> Result<f64> {
    spec.validate()?;
    if spec.m_sq_final >= 0.0 {
        return Err(Error::NotTachyonic(spec.m_sq_final));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::NonPositiveCoupling(lambda));
    }
    let threshold = 2.0 * spec.m_sq_final.abs() / lambda;
    let modes = spec.modes();
    let equal_point = |t: f64| -> Result<f64> {
        let mut acc = 0.0;
        for m in &modes {
            acc += m.var_qq(t)?;
        }
        Ok(acc / modes.len() as f64)
    };
    if equal_point(0.0)? >= threshold {
        return Ok(0.0);
    }
    let t_max = 0.999 * GROWTH_LIMIT / spec.max_growth_rate();
    // Forward scan to bracket the first crossing, then bisect; the
    // growing envelope makes the bracket reliable at this resolution.
    let steps = 4096;
    let mut lo = 0.0;
    let mut hi = None;
    for i in 1..=steps {
        let t = t_max * i as f64 / steps as f64;
        if equal_point(t)? >= threshold {
            hi = Some(t);
            break;
        }
        lo = t;
    }
    let Some(mut hi) = hi else {
        return Ok(f64::INFINITY);
    };
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if equal_point(mid)? >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
