//! Exact dynamics of one post-quench harmonic mode.
//!
//! A mode starts in the ground state of an oscillator with frequency
//! `omega0` and evolves under a quadratic Hamiltonian whose frequency
//! squared `omega_sq` may be negative (inverted potential). All kernels
//! are even functions of the post-quench frequency, so a single signed
//! `omega_sq` covers oscillatory, free and exponentially growing modes
//! without complex arithmetic:
//!
//! ```text
//! <q^2>(t) = 1/(2 w0) + (w0^2 - w^2) (1 - cos 2wt) / (4 w0 w^2)
//! <p^2>(t) = w0/2     - (w0^2 - w^2) (1 - cos 2wt) / (4 w0)
//! Re<qp>(t) =           (w0^2 - w^2) sin(2wt)      / (4 w0 w)
//! <N>(t)   =            (w0^2 - w^2)^2 (1 - cos 2wt) / (8 w0^2 w^2)
//! ```
//!
//! with `w^2 < 0` handled through `cosh`/`sinh` and `w^2 -> 0` through a
//! short Taylor series. The trigonometric deficits are computed as
//! `2 sin^2(wt)` / `2 sinh^2(xi t)` so the `w^2 -> 0` seam carries no
//! cancellation error.

use crate::error::{Error, Result};

/// Series switchover: below this value of |omega_sq| * t^2 the Taylor
/// branch is used (two terms leave a relative error below 1e-16 there).
const SERIES_THRESHOLD: f64 = 1e-8;

/// Largest allowed xi*t; beyond this cosh-type kernels overflow f64.
pub const GROWTH_LIMIT: f64 = 350.0;

/// Dynamical class of a post-quench mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    /// omega_sq > 0: oscillatory, equilibrates mode by mode.
    Stable,
    /// omega_sq = 0 within tolerance: free-particle (power-law) growth.
    Marginal,
    /// omega_sq < 0: exponential growth, never equilibrates.
    Unstable,
}

/// Classify a signed frequency squared against a squared reference scale.
///
/// `|omega_sq| < 1e-14 * max(1, scale_sq)` counts as marginal, absorbing
/// floating-point noise in the dispersion at small momenta.
pub fn classify(omega_sq: f64, scale_sq: f64) -> Stability {
    let tol = 1e-14 * scale_sq.max(1.0);
    if omega_sq.abs() < tol {
        Stability::Marginal
    } else if omega_sq > 0.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    }
}

/// One momentum mode of the quench: pre-quench frequency and signed
/// post-quench frequency squared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeQuench {
    omega0: f64,
    omega_sq: f64,
}

impl ModeQuench {
    pub fn new(omega0: f64, omega_sq: f64) -> Result<Self> {
        if !omega0.is_finite() {
            return Err(Error::NonFinite { what: "omega0", value: omega0 });
        }
        if !omega_sq.is_finite() {
            return Err(Error::NonFinite { what: "omega_sq", value: omega_sq });
        }
        if omega0 <= 0.0 {
            return Err(Error::NonPositiveFrequency(omega0));
        }
        Ok(Self { omega0, omega_sq })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega_sq(&self) -> f64 {
        self.omega_sq
    }

    /// Growth rate sqrt(-omega_sq) for unstable modes, zero otherwise.
    pub fn xi(&self) -> f64 {
        if self.omega_sq < 0.0 {
            (-self.omega_sq).sqrt()
        } else {
            0.0
        }
    }

    pub fn stability(&self) -> Stability {
        classify(self.omega_sq, self.omega0 * self.omega0)
    }

    /// Position variance <q^2>(t).
    pub fn var_qq(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        self.check_growth(t)?;
        let w0 = self.omega0;
        // Prefactor first: the raw product (w0^2 - w^2) * deficit can
        // overflow f64 inside the growth guard.
        let pref = (w0 * w0 - self.omega_sq) / (4.0 * w0);
        let v = 0.5 / w0 + pref * cos_deficit_ratio(self.omega_sq, t);
        finite(v, t)
    }

    /// Momentum variance <p^2>(t).
    pub fn var_pp(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        self.check_growth(t)?;
        let w0 = self.omega0;
        let pref = (w0 * w0 - self.omega_sq) / (4.0 * w0);
        let v = 0.5 * w0 - pref * cos_deficit(self.omega_sq, t);
        finite(v, t)
    }

    /// Symmetrized cross covariance Re<qp>(t); the universal imaginary
    /// i/2 from the commutator is not part of the covariance.
    pub fn cov_qp(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        self.check_growth(t)?;
        let w0 = self.omega0;
        let pref = (w0 * w0 - self.omega_sq) / (4.0 * w0);
        let v = pref * sine_ratio(self.omega_sq, t);
        finite(v, t)
    }

    /// Occupation <N>(t) of the pre-quench levels.
    pub fn occupation(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        self.check_growth(t)?;
        let w0 = self.omega0;
        let d = w0 * w0 - self.omega_sq;
        let pref = d * d / (8.0 * w0 * w0);
        let v = pref * cos_deficit_ratio(self.omega_sq, t);
        finite(v, t)
    }

    fn check_growth(&self, t: f64) -> Result<()> {
        let xi_t = self.xi() * t;
        if xi_t > GROWTH_LIMIT {
            return Err(Error::GrowthOverflow { xi_t, limit: GROWTH_LIMIT, t });
        }
        Ok(())
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::NonFinite { what: "t", value: t });
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

fn finite(v: f64, t: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteResult { t })
    }
}

/// (1 - cos 2wt), continued to -2 sinh^2(xi t) for omega_sq < 0.
pub(crate) fn cos_deficit(omega_sq: f64, t: f64) -> f64 {
    let x = omega_sq * t * t;
    if x.abs() < SERIES_THRESHOLD {
        2.0 * x * (1.0 - x / 3.0)
    } else if omega_sq > 0.0 {
        let s = (omega_sq.sqrt() * t).sin();
        2.0 * s * s
    } else {
        let sh = ((-omega_sq).sqrt() * t).sinh();
        -2.0 * sh * sh
    }
}

/// (1 - cos 2wt) / w^2, continued to 2 sinh^2(xi t) / xi^2; limit 2 t^2.
pub(crate) fn cos_deficit_ratio(omega_sq: f64, t: f64) -> f64 {
    let x = omega_sq * t * t;
    if x.abs() < SERIES_THRESHOLD {
        2.0 * t * t * (1.0 - x / 3.0)
    } else if omega_sq > 0.0 {
        let s = (omega_sq.sqrt() * t).sin();
        2.0 * s * s / omega_sq
    } else {
        let sh = ((-omega_sq).sqrt() * t).sinh();
        2.0 * sh * sh / (-omega_sq)
    }
}

/// sin(2wt) / w, continued to sinh(2 xi t) / xi; limit 2t.
pub(crate) fn sine_ratio(omega_sq: f64, t: f64) -> f64 {
    let x = omega_sq * t * t;
    if x.abs() < SERIES_THRESHOLD {
        2.0 * t * (1.0 - 2.0 * x / 3.0)
    } else if omega_sq > 0.0 {
        let w = omega_sq.sqrt();
        (2.0 * w * t).sin() / w
    } else {
        let xi = (-omega_sq).sqrt();
        (2.0 * xi * t).sinh() / xi
    }
}

/// Effective inverse temperature of a stable mode after the quench,
/// `(1/w) log((w + w0)^2 / (w0 - w)^2)`; +infinity when nothing was
/// quenched (w == w0).
pub fn beta_eff(omega0: f64, omega: f64) -> Result<f64> {
    if !omega0.is_finite() {
        return Err(Error::NonFinite { what: "omega0", value: omega0 });
    }
    if !omega.is_finite() {
        return Err(Error::NonFinite { what: "omega", value: omega });
    }
    if omega0 <= 0.0 {
        return Err(Error::NonPositiveFrequency(omega0));
    }
    if omega <= 0.0 {
        return Err(Error::BetaEffUnstable(omega));
    }
    if omega == omega0 {
        return Ok(f64::INFINITY);
    }
    Ok((2.0 / omega) * ((omega + omega0) / (omega0 - omega).abs()).ln())
}

/// Deep-quench approximation of [`beta_eff`], valid for w0 >> w:
/// `(4/w0)(1 + w^2 / (3 w0^2))`.
pub fn beta_eff_deep(omega0: f64, omega: f64) -> f64 {
    (4.0 / omega0) * (1.0 + omega * omega / (3.0 * omega0 * omega0))
}
