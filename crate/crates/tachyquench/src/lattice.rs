//! Periodic hypercubic lattices of coupled oscillators: momentum grids,
//! dispersion relations and the quench parameterization.
//!
//! The Hamiltonian couples nearest neighbours with strength `Omega^2`
//! and carries a site mass, giving the dispersion
//! `w_k^2 = m^2 + 4 Omega^2 sum_s sin^2(k_s a / 2)` on momenta
//! `k_s = (2 pi / L_s) n_s` with `n_s = 0, +-1, ..., +-(N_s - 1)/2`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::mode::{classify, ModeQuench, Stability};

/// Which mass enters the dispersion: the pre-quench `m0` or the signed
/// post-quench `m_sq_final`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichMass {
    Initial,
    Final,
}

/// Parameters of two fields coupled by `g Phi_1 Phi_2` on top of a
/// common mass term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoupledFieldParams {
    pub m_sq: f64,
    pub g: f64,
}

/// Decoupled masses of the rotated fields `(Phi_1 +- Phi_2)/sqrt(2)`:
/// `m_+-^2 = m^2 +- g`. The minus sector turns tachyonic when `g > m^2`.
pub fn mass_map(p: CoupledFieldParams) -> (f64, f64) {
    (p.m_sq + p.g, p.m_sq - p.g)
}

/// Full parameterization of a quench experiment.
///
/// Serializes to a flat JSON object with keys `dims`, `sites_per_dim`,
/// `spacing`, `omega`, `m0`, `m_sq_final`, `deep_quench`; unknown keys
/// are rejected. `omega = null` (or absent) resolves to sqrt(total
/// sites), and `spacing` defaults to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuenchSpec {
    #[serde(default = "default_dims")]
    pub dims: usize,
    #[serde(deserialize_with = "sites_scalar_or_list")]
    pub sites_per_dim: Vec<usize>,
    #[serde(default = "default_spacing")]
    pub spacing: f64,
    #[serde(default)]
    pub omega: Option<f64>,
    pub m0: f64,
    pub m_sq_final: f64,
    #[serde(default)]
    pub deep_quench: bool,
}

fn default_dims() -> usize {
    1
}

fn default_spacing() -> f64 {
    1.0
}

fn sites_scalar_or_list<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<usize>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Sites {
        One(usize),
        Many(Vec<usize>),
    }
    match Sites::deserialize(d)? {
        Sites::One(n) => Ok(vec![n]),
        Sites::Many(v) if v.is_empty() => Err(D::Error::custom("sites_per_dim must not be empty")),
        Sites::Many(v) => Ok(v),
    }
}

impl QuenchSpec {
    /// One-dimensional chain with spacing 1 and `Omega = sqrt(N)`.
    pub fn chain(sites: usize, m0: f64, m_sq_final: f64) -> Result<Self> {
        let spec = Self {
            dims: 1,
            sites_per_dim: vec![sites],
            spacing: 1.0,
            omega: None,
            m0,
            m_sq_final,
            deep_quench: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Validate invariants; returns advisory warnings (deep-quench scale
    /// separation below the comfortable margin).
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.dims == 0 {
            return Err(Error::InvalidSpec("dims must be >= 1".into()));
        }
        let sites = if self.sites_per_dim.len() == 1 && self.dims > 1 {
            vec![self.sites_per_dim[0]; self.dims]
        } else {
            self.sites_per_dim.clone()
        };
        if sites.len() != self.dims {
            return Err(Error::InvalidSpec(format!(
                "sites_per_dim has {} entries for dims = {}",
                sites.len(),
                self.dims
            )));
        }
        for &n in &sites {
            if n == 0 {
                return Err(Error::InvalidSpec("sites_per_dim entries must be positive".into()));
            }
            if n % 2 == 0 {
                return Err(Error::EvenSites(n));
            }
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(Error::InvalidSpec(format!("spacing must be positive, got {}", self.spacing)));
        }
        if let Some(w) = self.omega {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidSpec(format!("omega must be positive, got {w}")));
            }
        }
        if !(self.m0.is_finite() && self.m0 > 0.0) {
            return Err(Error::InvalidSpec(format!("m0 must be positive, got {}", self.m0)));
        }
        if !self.m_sq_final.is_finite() {
            return Err(Error::InvalidSpec("m_sq_final must be finite".into()));
        }
        let mut warnings = Vec::new();
        if self.deep_quench {
            // Deep quench needs m0 far above both the final mass scale
            // and the infrared momentum scale c * 2 pi / L.
            let l_min = self
                .sites_list()
                .iter()
                .map(|&n| self.spacing * n as f64)
                .fold(f64::INFINITY, f64::min);
            let ir = self.omega() * self.spacing * (2.0 * std::f64::consts::PI / l_min);
            let scale = self.m_sq_final.abs().sqrt().max(ir);
            if self.m0 < 100.0 * scale {
                return Err(Error::InvalidSpec(format!(
                    "deep_quench requires m0 >= 100 * max scale ({:.6} vs {:.6})",
                    self.m0,
                    100.0 * scale
                )));
            }
            if self.m0 < 1000.0 * scale {
                warnings.push(format!(
                    "deep_quench scale separation is thin: m0 = {} < 1000 * {:.6}",
                    self.m0, scale
                ));
            }
        }
        Ok(warnings)
    }

    fn sites_list(&self) -> Vec<usize> {
        if self.sites_per_dim.len() == 1 && self.dims > 1 {
            vec![self.sites_per_dim[0]; self.dims]
        } else {
            self.sites_per_dim.clone()
        }
    }

    /// Sites along dimension `s`.
    pub fn sites(&self, s: usize) -> usize {
        let list = self.sites_list();
        list[s]
    }

    /// Total number of lattice sites.
    pub fn total_sites(&self) -> usize {
        self.sites_list().iter().product()
    }

    /// Coupling Omega; defaults to sqrt(total sites).
    pub fn omega(&self) -> f64 {
        self.omega.unwrap_or_else(|| (self.total_sites() as f64).sqrt())
    }

    /// Emergent speed of light c = a * Omega.
    pub fn speed_of_light(&self) -> f64 {
        self.spacing * self.omega()
    }

    /// Integer mode numbers of the momentum grid in a fixed row-major
    /// order, each dimension running n = -(N-1)/2 ..= (N-1)/2.
    pub fn mode_numbers(&self) -> Vec<Vec<i64>> {
        let sites = self.sites_list();
        let total = self.total_sites();
        let mut out = Vec::with_capacity(total);
        let mut current = vec![0i64; self.dims];
        fill_modes(&sites, 0, &mut current, &mut out);
        out
    }

    /// Momentum vector for a given mode number.
    pub fn momentum(&self, n: &[i64]) -> Vec<f64> {
        let sites = self.sites_list();
        n.iter()
            .zip(&sites)
            .map(|(&ns, &len)| 2.0 * std::f64::consts::PI * ns as f64 / (len as f64 * self.spacing))
            .collect()
    }

    /// Sum of 4 sin^2(k_s a / 2) over dimensions, computed from the
    /// integer mode numbers so it is exactly symmetric under n -> -n.
    fn band_term(&self, n: &[i64]) -> f64 {
        let sites = self.sites_list();
        n.iter()
            .zip(&sites)
            .map(|(&ns, &len)| {
                let s = (std::f64::consts::PI * ns as f64 / len as f64).sin();
                4.0 * s * s
            })
            .sum()
    }

    /// Per-mode quench data `(omega0_k, omega_k^2)` in grid order.
    pub fn modes(&self) -> Vec<ModeQuench> {
        let omega = self.omega();
        let w_sq = omega * omega;
        self.mode_numbers()
            .iter()
            .map(|n| {
                let band = w_sq * self.band_term(n);
                ModeQuench::new((self.m0 * self.m0 + band).sqrt(), self.m_sq_final + band)
                    .expect("validated spec yields a positive omega0")
            })
            .collect()
    }

    /// Largest post-quench growth rate max_k xi_k (zero for stable
    /// quenches); the k = 0 mode always attains it.
    pub fn max_growth_rate(&self) -> f64 {
        if self.m_sq_final < 0.0 {
            (-self.m_sq_final).sqrt()
        } else {
            0.0
        }
    }
}

fn fill_modes(sites: &[usize], dim: usize, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if dim == sites.len() {
        out.push(current.clone());
        return;
    }
    let half = (sites[dim] as i64 - 1) / 2;
    for n in -half..=half {
        current[dim] = n;
        fill_modes(sites, dim + 1, current, out);
    }
}

/// All momentum vectors of the grid, in the fixed mode order.
pub fn momentum_grid(spec: &QuenchSpec) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    Ok(spec.mode_numbers().iter().map(|n| spec.momentum(n)).collect())
}

/// Frequency squared at momentum `k` for the chosen mass.
pub fn dispersion_sq(spec: &QuenchSpec, k: &[f64], which: WhichMass) -> Result<f64> {
    if k.len() != spec.dims {
        return Err(Error::DimensionMismatch { got: k.len(), expected: spec.dims });
    }
    let omega = spec.omega();
    let band: f64 = k
        .iter()
        .map(|&ks| {
            let s = (ks * spec.spacing / 2.0).sin();
            4.0 * omega * omega * s * s
        })
        .sum();
    Ok(match which {
        WhichMass::Initial => spec.m0 * spec.m0 + band,
        WhichMass::Final => spec.m_sq_final + band,
    })
}

/// Pre/post-quench mode data at momentum `k`.
pub fn mode_at(spec: &QuenchSpec, k: &[f64]) -> Result<ModeQuench> {
    let w0_sq = dispersion_sq(spec, k, WhichMass::Initial)?;
    let w_sq = dispersion_sq(spec, k, WhichMass::Final)?;
    ModeQuench::new(w0_sq.sqrt(), w_sq)
}

/// Number of grid modes with negative post-quench frequency squared.
pub fn unstable_mode_count(spec: &QuenchSpec) -> Result<usize> {
    spec.validate()?;
    let omega = spec.omega();
    Ok(spec
        .modes()
        .iter()
        .filter(|m| classify(m.omega_sq(), omega * omega) == Stability::Unstable)
        .count())
}
