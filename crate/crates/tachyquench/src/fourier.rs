//! Deterministic discrete Fourier sums over the momentum grid.
//!
//! Real-space observables are sums `(1/N) sum_k cos(k . r) v_k` with
//! `v_k` even in k. The phase `k . r` is `2 pi j / N` for an integer
//! `j`, so cosines come from one precomputed table indexed by
//! `j mod N`, folded onto `0 ..= N/2`. Folding makes the sums exactly
//! invariant under `r -> -r` (same table entries in the same order) and
//! avoids per-term `cos` calls on large lattices.

use crate::error::{Error, Result};
use crate::lattice::QuenchSpec;

#[derive(Clone)]
pub(crate) struct ModeSum {
    /// Integer mode numbers in grid order.
    modes_n: Vec<Vec<i64>>,
    /// Per-dimension stride N / N_s for the common-denominator phase.
    strides: Vec<i64>,
    sites: Vec<usize>,
    total: i64,
    /// cos(2 pi j / N) for j = 0 ..= N/2.
    cos_table: Vec<f64>,
}

impl std::fmt::Debug for ModeSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModeSum").field("modes", &self.modes_n.len()).finish()
    }
}

impl ModeSum {
    pub fn new(spec: &QuenchSpec) -> Self {
        let sites: Vec<usize> = (0..spec.dims).map(|s| spec.sites(s)).collect();
        let total = spec.total_sites() as i64;
        let strides: Vec<i64> = sites.iter().map(|&n| total / n as i64).collect();
        let half = (total / 2) as usize;
        let step = 2.0 * std::f64::consts::PI / total as f64;
        let cos_table = (0..=half).map(|j| (step * j as f64).cos()).collect();
        Self { modes_n: spec.mode_numbers(), strides, sites, total, cos_table }
    }

    /// Check a displacement against the lattice extent.
    pub fn check_displacement(&self, delta: &[i64]) -> Result<()> {
        if delta.len() != self.sites.len() {
            return Err(Error::DisplacementOutOfRange(delta.to_vec()));
        }
        for (d, &n) in delta.iter().zip(&self.sites) {
            if d.unsigned_abs() as usize >= n {
                return Err(Error::DisplacementOutOfRange(delta.to_vec()));
            }
        }
        Ok(())
    }

    /// Canonical key of the displacement class: components reduced mod
    /// N_s and folded to min(d, N_s - d), flattened row-major. Classes
    /// with equal keys produce bit-identical sums.
    pub fn class_key(&self, delta: &[i64]) -> usize {
        let mut key = 0usize;
        for (&d, &n) in delta.iter().zip(&self.sites) {
            let r = d.rem_euclid(n as i64) as usize;
            let folded = r.min(n - r);
            key = key * n + folded;
        }
        key
    }

    /// `(1/N) sum_k cos(k . delta) v_k` in ascending mode order.
    pub fn sum(&self, values: &[f64], delta: &[i64]) -> f64 {
        debug_assert_eq!(values.len(), self.modes_n.len());
        let mut acc = 0.0;
        for (n, &v) in self.modes_n.iter().zip(values) {
            acc += self.cos_phase(n, delta) * v;
        }
        acc / self.total as f64
    }

    /// Antisymmetric partner of [`sum`]; cancels pairwise over the
    /// symmetric grid and is only evaluated by debug assertions.
    #[cfg(debug_assertions)]
    pub fn sine_residual(&self, values: &[f64], delta: &[i64]) -> f64 {
        let step = 2.0 * std::f64::consts::PI / self.total as f64;
        let mut acc = 0.0;
        for (n, &v) in self.modes_n.iter().zip(values) {
            let j = self.phase_index_signed(n, delta);
            acc += (step * j as f64).sin() * v;
        }
        acc / self.total as f64
    }

    fn phase_index_signed(&self, n: &[i64], delta: &[i64]) -> i64 {
        let mut j = 0i64;
        for ((&ns, &d), &stride) in n.iter().zip(delta).zip(&self.strides) {
            j += ns * d * stride;
        }
        j.rem_euclid(self.total)
    }

    fn cos_phase(&self, n: &[i64], delta: &[i64]) -> f64 {
        let j = self.phase_index_signed(n, delta) as usize;
        let folded = j.min(self.total as usize - j);
        self.cos_table[folded]
    }
}

/// Row-major coordinates of a flattened site index.
pub(crate) fn unflatten_site(index: usize, sites: &[usize]) -> Vec<i64> {
    let mut rem = index;
    let mut coords = vec![0i64; sites.len()];
    for (d, &n) in sites.iter().enumerate().rev() {
        coords[d] = (rem % n) as i64;
        rem /= n;
    }
    coords
}

/// Flattened index of row-major coordinates, reduced periodically.
pub(crate) fn flatten_site(coords: &[i64], sites: &[usize]) -> usize {
    let mut idx = 0usize;
    for (&c, &n) in coords.iter().zip(sites) {
        idx = idx * n + c.rem_euclid(n as i64) as usize;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> QuenchSpec {
        QuenchSpec::chain(n, 1.0, 1.0).unwrap()
    }

    #[test]
    fn constant_values_sum_to_delta() {
        // (1/N) sum_k cos(k r) = delta_{r,0} on the periodic grid.
        let spec = chain(9);
        let ms = ModeSum::new(&spec);
        let ones = vec![1.0; 9];
        assert!((ms.sum(&ones, &[0]) - 1.0).abs() < 1e-15);
        for r in 1..9 {
            assert!(ms.sum(&ones, &[r]).abs() < 1e-14, "r = {r}");
        }
    }

    #[test]
    fn reflection_is_bit_exact() {
        let spec = chain(11);
        let ms = ModeSum::new(&spec);
        let values: Vec<f64> = (0..11).map(|i| ((i * i) as f64 * 0.381).sin() + 1.5).collect();
        // Even part only: symmetrize values over k <-> -k first.
        let sym: Vec<f64> = (0..11).map(|i| 0.5 * (values[i] + values[10 - i])).collect();
        for r in 1..=5i64 {
            let a = ms.sum(&sym, &[r]);
            let b = ms.sum(&sym, &[-r]);
            assert_eq!(a.to_bits(), b.to_bits(), "r = {r}");
        }
    }

    #[test]
    fn matches_direct_cosine_sum() {
        let spec = chain(15);
        let ms = ModeSum::new(&spec);
        let values: Vec<f64> = (0..15).map(|i| (i as f64 * 0.7).cos()).collect();
        let grid: Vec<f64> = spec.mode_numbers().iter().map(|n| spec.momentum(n)[0]).collect();
        for r in 0..8i64 {
            let direct: f64 =
                grid.iter().zip(&values).map(|(&k, &v)| (k * r as f64).cos() * v).sum::<f64>() / 15.0;
            let fast = ms.sum(&values, &[r]);
            assert!((direct - fast).abs() < 1e-13, "r = {r}: {direct} vs {fast}");
        }
    }

    #[test]
    fn two_dim_phase() {
        let spec = QuenchSpec {
            dims: 2,
            sites_per_dim: vec![3, 5],
            spacing: 1.0,
            omega: Some(1.0),
            m0: 1.0,
            m_sq_final: 1.0,
            deep_quench: false,
        };
        let ms = ModeSum::new(&spec);
        let values: Vec<f64> = (0..15).map(|i| 1.0 + 0.1 * i as f64).collect();
        let modes = spec.mode_numbers();
        for delta in [[0i64, 0], [1, 0], [0, 2], [1, 2], [-1, 2]] {
            let direct: f64 = modes
                .iter()
                .zip(&values)
                .map(|(n, &v)| {
                    let phase = 2.0 * std::f64::consts::PI
                        * (n[0] as f64 * delta[0] as f64 / 3.0 + n[1] as f64 * delta[1] as f64 / 5.0);
                    phase.cos() * v
                })
                .sum::<f64>()
                / 15.0;
            let fast = ms.sum(&values, &delta);
            assert!((direct - fast).abs() < 1e-13, "{delta:?}: {direct} vs {fast}");
        }
    }

    #[test]
    fn displacement_bounds() {
        let spec = chain(9);
        let ms = ModeSum::new(&spec);
        assert!(ms.check_displacement(&[8]).is_ok());
        assert!(ms.check_displacement(&[9]).is_err());
        assert!(ms.check_displacement(&[-9]).is_err());
        assert!(ms.check_displacement(&[1, 2]).is_err());
    }

    #[test]
    fn class_keys_fold_reflections() {
        let spec = chain(9);
        let ms = ModeSum::new(&spec);
        assert_eq!(ms.class_key(&[2]), ms.class_key(&[-2]));
        assert_eq!(ms.class_key(&[2]), ms.class_key(&[7]));
        assert_ne!(ms.class_key(&[2]), ms.class_key(&[3]));
    }
}
