//! Covariance matrices, symplectic spectra, entanglement entropy and
//! mutual information of the post-quench Gaussian state.
//!
//! The state is fully described by `G_nm = Re<r_n r_m>` with
//! `r = (q_1..q_M, p_1..p_M)`. Entropies come from the symplectic
//! eigenvalues: the positive imaginary parts of the spectrum of
//! `Omega G`, each contributing `f(s + 1/2) - f(s - 1/2)` with
//! `f(x) = x ln x` (natural logarithm throughout).

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::correlator::{mode_kernels, CorrelatorKind};
use crate::error::{Error, Result};
use crate::fit::least_squares_slope;
use crate::fourier::{unflatten_site, ModeSum};
use crate::lattice::QuenchSpec;

/// Hard cap on xi_max * t for entropy-path evaluations; conditioning of
/// the eigenproblems degrades long before f64 overflow does.
pub const ENTROPY_GROWTH_LIMIT: f64 = 300.0;

/// Symplectic eigenvalues below 1/2 - this margin are a construction
/// error rather than round-off.
const PHYSICALITY_MARGIN: f64 = 1e-6;

/// Switch to the `ln(s) + 1` entropy asymptote above this eigenvalue.
const ENTROPY_ASYMPTOTE_THRESHOLD: f64 = 1e8;

/// Real symmetric covariance matrix in (q.., p..) ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    data: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Wrap a 2M x 2M matrix; it must be exactly symmetric.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        if !data.is_square() || !data.nrows().is_multiple_of(2) || data.nrows() == 0 {
            return Err(Error::BadCovarianceShape { rows: data.nrows(), cols: data.ncols() });
        }
        let asym = (&data - data.transpose()).abs().max();
        if asym > 0.0 {
            return Err(Error::InvalidSpec(format!(
                "covariance must be exactly symmetric (max asymmetry {asym:e})"
            )));
        }
        Ok(Self { data })
    }

    /// Number of modes M.
    pub fn modes(&self) -> usize {
        self.data.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn qq(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    pub fn pp(&self, i: usize, j: usize) -> f64 {
        let m = self.modes();
        self.data[(m + i, m + j)]
    }

    pub fn qp(&self, i: usize, j: usize) -> f64 {
        let m = self.modes();
        self.data[(i, m + j)]
    }
}

/// An ordered subsystem: strictly increasing site indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    sites: Vec<usize>,
}

impl Region {
    pub fn new(sites: Vec<usize>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidRegion("region must be nonempty".into()));
        }
        for w in sites.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidRegion(format!(
                    "sites must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { sites })
    }

    /// Contiguous block `[start, start + len)`.
    pub fn block(start: usize, len: usize) -> Result<Self> {
        Self::new((start..start + len).collect())
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Sites of the full lattice not in this region.
    pub fn complement(&self, total_sites: usize) -> Result<Self> {
        Self::new((0..total_sites).filter(|s| !self.sites.contains(s)).collect())
    }

    fn union(&self, other: &Region) -> Result<Region> {
        let mut sites = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.sites.iter().peekable(), other.sites.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) if x == y => return Err(Error::OverlappingRegions(x)),
                (Some(&&x), Some(&&y)) if x < y => {
                    sites.push(x);
                    a.next();
                }
                (Some(_), Some(&&y)) => {
                    sites.push(y);
                    b.next();
                }
                (Some(&&x), None) => {
                    sites.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    sites.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Region::new(sites)
    }
}

fn check_entropy_growth(spec: &QuenchSpec, t: f64) -> Result<()> {
    let xi_t = spec.max_growth_rate() * t;
    if xi_t > ENTROPY_GROWTH_LIMIT {
        return Err(Error::GrowthOverflow { xi_t, limit: ENTROPY_GROWTH_LIMIT, t });
    }
    Ok(())
}

/// Covariance of the evolved state restricted to `sites`, assembled
/// directly from the mode kernels (always the full, finite-`m0` ones;
/// the deep-quench flag never degrades the state itself).
///
/// Entries depend only on the displacement class, so blocks of the
/// full-lattice matrix are circulant and the result is exactly
/// symmetric by construction.
pub fn covariance_for_sites(spec: &QuenchSpec, t: f64, sites: &[usize]) -> Result<CovarianceMatrix> {
    spec.validate()?;
    if sites.is_empty() {
        return Err(Error::InvalidRegion("no sites selected".into()));
    }
    let total = spec.total_sites();
    for &s in sites {
        if s >= total {
            return Err(Error::SiteOutOfRange { index: s, sites: total });
        }
    }
    let full = full_kernels(spec, t)?;
    let sum = ModeSum::new(spec);
    let dims: Vec<usize> = (0..spec.dims).map(|s| spec.sites(s)).collect();
    let mut cache: std::collections::HashMap<usize, (f64, f64, f64)> = std::collections::HashMap::new();
    let m = sites.len();
    let mut g = DMatrix::zeros(2 * m, 2 * m);
    for (a, &i) in sites.iter().enumerate() {
        let ci = unflatten_site(i, &dims);
        for (b, &j) in sites.iter().enumerate().take(a + 1) {
            let cj = unflatten_site(j, &dims);
            let delta: Vec<i64> = ci.iter().zip(&cj).map(|(x, y)| x - y).collect();
            let key = sum.class_key(&delta);
            let (qq, pp, qp) = *cache.entry(key).or_insert_with(|| {
                (sum.sum(&full.qq, &delta), sum.sum(&full.pp, &delta), sum.sum(&full.qp, &delta))
            });
            g[(a, b)] = qq;
            g[(b, a)] = qq;
            g[(m + a, m + b)] = pp;
            g[(m + b, m + a)] = pp;
            // Re<q_a p_b> is even in the displacement, so the qp block
            // is symmetric as well.
            g[(a, m + b)] = qp;
            g[(b, m + a)] = qp;
            g[(m + a, b)] = qp;
            g[(m + b, a)] = qp;
        }
    }
    CovarianceMatrix::new(g)
}

struct FullKernels {
    qq: Vec<f64>,
    pp: Vec<f64>,
    qp: Vec<f64>,
}

fn full_kernels(spec: &QuenchSpec, t: f64) -> Result<FullKernels> {
    // Force the finite-m0 kernels regardless of the deep-quench flag.
    let mut bare = spec.clone();
    bare.deep_quench = false;
    Ok(FullKernels {
        qq: mode_kernels(&bare, CorrelatorKind::Qq, t)?,
        pp: mode_kernels(&bare, CorrelatorKind::Pp, t)?,
        qp: mode_kernels(&bare, CorrelatorKind::Qp, t)?,
    })
}

/// Full-lattice covariance matrix at time `t`.
pub fn covariance(spec: &QuenchSpec, t: f64) -> Result<CovarianceMatrix> {
    let total = spec.total_sites();
    let sites: Vec<usize> = (0..total).collect();
    covariance_for_sites(spec, t, &sites)
}

/// Restrict a covariance matrix to a region, preserving (q.., p..)
/// ordering.
pub fn restrict(g: &CovarianceMatrix, region: &Region) -> Result<CovarianceMatrix> {
    restrict_indices(g, region.sites())
}

pub(crate) fn restrict_indices(g: &CovarianceMatrix, indices: &[usize]) -> Result<CovarianceMatrix> {
    let m = g.modes();
    for &i in indices {
        if i >= m {
            return Err(Error::SiteOutOfRange { index: i, sites: m });
        }
    }
    let l = indices.len();
    let mut out = DMatrix::zeros(2 * l, 2 * l);
    for (a, &i) in indices.iter().enumerate() {
        for (b, &j) in indices.iter().enumerate() {
            out[(a, b)] = g.matrix()[(i, j)];
            out[(a, l + b)] = g.matrix()[(i, m + j)];
            out[(l + a, b)] = g.matrix()[(m + i, j)];
            out[(l + a, l + b)] = g.matrix()[(m + i, m + j)];
        }
    }
    CovarianceMatrix::new(out)
}

/// Symplectic eigenvalues of a covariance matrix, ascending.
///
/// The spectrum of the real matrix `Omega G` consists of pairs `+-i s`;
/// the two halves must agree to 1e-8 relative, eigenvalues in
/// `[1/2 - 1e-6, 1/2)` are clamped to exactly 1/2 (round-off on pure
/// modes), and anything lower is reported as non-physical.
pub fn symplectic_spectrum(g: &CovarianceMatrix) -> Result<Vec<f64>> {
    let raw = symplectic_spectrum_raw(g)?;
    let mut sigmas = Vec::with_capacity(raw.len());
    for sigma in raw {
        if sigma < 0.5 - PHYSICALITY_MARGIN {
            return Err(Error::NonPhysical { sigma });
        }
        sigmas.push(if sigma < 0.5 { 0.5 } else { sigma });
    }
    Ok(sigmas)
}

/// Pairing-checked symplectic eigenvalues without the clamp or the
/// physicality gate; suited to round-off audits of near-pure states.
///
/// Two routes, both with a built-in +-pair consistency check:
/// - primary: Cholesky G = L L^T, then the singular values of the
///   antisymmetric L^T Omega L, which come in exactly degenerate pairs.
///   Singular values are perfectly conditioned, so eigenvalues near 1/2
///   survive to ~eps * |G| even for strongly squeezed states (the
///   eigenvalues of Omega G carry a kappa(G)^(1/2) condition number
///   instead, which breaks the 1/2 - 1e-9 physicality resolution well
///   inside the working range);
/// - fallback, when G is too ill-conditioned for Cholesky or the
///   singular values fail to pair: the +-i sigma eigenvalue pairs of
///   the real matrix Omega G.
pub fn symplectic_spectrum_raw(g: &CovarianceMatrix) -> Result<Vec<f64>> {
    if let Some(sigmas) = williamson_route(g) {
        return Ok(sigmas);
    }
    eigen_route(g)
}

fn williamson_route(g: &CovarianceMatrix) -> Option<Vec<f64>> {
    let m = g.modes();
    let chol = nalgebra::Cholesky::new(g.matrix().clone())?;
    let l = chol.l();
    // Omega * L without materializing Omega.
    let mut omega_l = DMatrix::zeros(2 * m, 2 * m);
    for j in 0..2 * m {
        for i in 0..m {
            omega_l[(i, j)] = l[(m + i, j)];
            omega_l[(m + i, j)] = -l[(i, j)];
        }
    }
    let k = l.transpose() * omega_l;
    // Exact antisymmetrization kills the symmetric round-off part.
    let k = 0.5 * (&k - k.transpose());
    let mut values: Vec<f64> = k.svd(false, false).singular_values.iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut sigmas = Vec::with_capacity(m);
    for pair in values.chunks(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if (hi - lo).abs() > 1e-8 * hi.max(1.0) {
            return None;
        }
        sigmas.push(0.5 * (lo + hi));
    }
    Some(sigmas)
}

fn eigen_route(g: &CovarianceMatrix) -> Result<Vec<f64>> {
    let m = g.modes();
    let n = 2 * m;
    // Omega * G without materializing Omega: top rows take the p-block
    // rows of G, bottom rows the negated q-block rows.
    let mut a = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..m {
            a[(i, j)] = g.matrix()[(m + i, j)];
            a[(m + i, j)] = -g.matrix()[(i, j)];
        }
    }
    let eig = a.complex_eigenvalues();
    let mut plus: Vec<f64> = Vec::with_capacity(m);
    let mut minus: Vec<f64> = Vec::with_capacity(m);
    for l in eig.iter() {
        if l.im > 0.0 {
            plus.push(l.im);
        } else if l.im < 0.0 {
            minus.push(-l.im);
        }
        // Exactly real eigenvalues fall through and surface as a count
        // mismatch below.
    }
    if plus.len() != m || minus.len() != m {
        return Err(Error::PairingCount { expected: m, got: plus.len().min(minus.len()) });
    }
    plus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    minus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut sigmas = Vec::with_capacity(m);
    for (&p, &q) in plus.iter().zip(&minus) {
        if (p - q).abs() > 1e-8 * p.max(1.0) {
            return Err(Error::PairingMismatch { plus: p, minus: q });
        }
        sigmas.push(0.5 * (p + q));
    }
    Ok(sigmas)
}

/// Entropy contribution of one symplectic eigenvalue,
/// `f(s + 1/2) - f(s - 1/2)` with `f(x) = x ln x`; large eigenvalues use
/// the asymptote `ln(s) + 1`.
pub fn mode_entropy(sigma: f64) -> f64 {
    if sigma > ENTROPY_ASYMPTOTE_THRESHOLD {
        sigma.ln() + 1.0
    } else {
        mode_entropy_exact(sigma)
    }
}

/// Exact branch of [`mode_entropy`] without the asymptote switch; used
/// to pin the switchover continuity.
///
/// For large eigenvalues the naive difference `f(s+1/2) - f(s-1/2)`
/// cancels catastrophically, so it is rewritten with u = 1/(2s) as
/// `ln(s) + s [(1+u) ln(1+u) - (1-u) ln(1-u)]`, exact to full relative
/// precision via `ln_1p`.
pub fn mode_entropy_exact(sigma: f64) -> f64 {
    if sigma <= 0.5 {
        0.0
    } else if sigma < 10.0 {
        let a = sigma + 0.5;
        let b = sigma - 0.5;
        a * a.ln() - b * b.ln()
    } else {
        let u = 0.5 / sigma;
        sigma.ln() + sigma * ((1.0 + u) * u.ln_1p() - (1.0 - u) * (-u).ln_1p())
    }
}

/// Large-eigenvalue asymptote of [`mode_entropy`].
pub fn mode_entropy_asymptote(sigma: f64) -> f64 {
    sigma.ln() + 1.0
}

/// Von Neumann entropy (nats) of the reduced state on `region`.
pub fn entropy(g: &CovarianceMatrix, region: &Region) -> Result<f64> {
    let reduced = restrict(g, region)?;
    Ok(symplectic_spectrum(&reduced)?.iter().map(|&s| mode_entropy(s)).sum())
}

/// Mutual information `I_AB = S_A + S_B - S_{A u B}` between disjoint
/// regions; negative round-off (above -1e-8) is clamped to zero.
pub fn mutual_information(g: &CovarianceMatrix, a: &Region, b: &Region) -> Result<f64> {
    let union = a.union(b)?;
    let i = entropy(g, a)? + entropy(g, b)? - entropy(g, &union)?;
    if i < -1e-8 {
        return Err(Error::SubadditivityViolated(i));
    }
    Ok(i.max(0.0))
}

/// Purity of the Gaussian state, `prod_n (2 s_n) = sqrt(det(2 G))`,
/// evaluated in log space through an LU factorization.
pub fn purity(g: &CovarianceMatrix) -> f64 {
    let lu = g.matrix().clone().lu();
    let mut log_det = 0.0;
    for i in 0..g.matrix().nrows() {
        log_det += lu.u()[(i, i)].abs().ln();
    }
    (g.modes() as f64 * std::f64::consts::LN_2 + 0.5 * log_det).exp()
}

/// Symplectic spectrum as a (index, sigma) table for file output.
pub fn spectrum_result(sigmas: &[f64]) -> crate::output::ExperimentResult {
    let mut table = crate::output::ExperimentResult::new(&["index", "sigma"]);
    for (i, &s) in sigmas.iter().enumerate() {
        table.push(vec![crate::output::Cell::Num(i as f64), crate::output::Cell::Num(s)]);
    }
    table
}

/// Entanglement entropy series of a region over a time grid, with an
/// optional least-squares slope over a late window.
#[derive(Debug, Clone)]
pub struct EntropyGrowth {
    pub times: Vec<f64>,
    pub entropies: Vec<f64>,
    /// Slope of S(t) over the fit window, when one was requested.
    pub slope: Option<f64>,
}

/// Evaluate `S_region(t)` over `ts` (parallel across time points) and
/// fit a linear slope over `fit_window = (t_lo, t_hi)` if given. After a
/// tachyonic quench the slope approaches `2 |m| L`.
pub fn entropy_growth(
    spec: &QuenchSpec,
    region: &Region,
    ts: &[f64],
    fit_window: Option<(f64, f64)>,
) -> Result<EntropyGrowth> {
    spec.validate()?;
    for &t in ts {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        check_entropy_growth(spec, t)?;
    }
    let entropies: Vec<f64> = ts
        .par_iter()
        .map(|&t| {
            let g = covariance_for_sites(spec, t, region.sites())?;
            Ok(symplectic_spectrum(&g)?.iter().map(|&s| mode_entropy(s)).sum())
        })
        .collect::<Result<_>>()?;
    let slope = match fit_window {
        None => None,
        Some((lo, hi)) => {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for (&t, &s) in ts.iter().zip(&entropies) {
                if t >= lo && t <= hi {
                    xs.push(t);
                    ys.push(s);
                }
            }
            Some(least_squares_slope(&xs, &ys)?)
        }
    };
    Ok(EntropyGrowth { times: ts.to_vec(), entropies, slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::ModeQuench;

    fn diag_cov(values: &[f64]) -> CovarianceMatrix {
        CovarianceMatrix::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(values.to_vec())))
            .unwrap()
    }

    #[test]
    fn vacuum_spectrum() {
        let g = diag_cov(&[0.5, 0.5, 0.5, 0.5]);
        let s = symplectic_spectrum(&g).unwrap();
        for v in &s {
            assert!((v - 0.5).abs() < 1e-12, "{v}");
        }
        assert!(entropy(&g, &Region::new(vec![0, 1]).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn isotropic_thermal_like_spectrum() {
        let s = 3.0;
        let g = diag_cov(&[s / 2.0; 6]);
        let spec = symplectic_spectrum(&g).unwrap();
        for v in spec {
            assert!((v - s / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_mode_determinant_cross_check() {
        let m = ModeQuench::new(2.0, -1.0).unwrap();
        let (qq, pp, qp) =
            (m.var_qq(1.0).unwrap(), m.var_pp(1.0).unwrap(), m.cov_qp(1.0).unwrap());
        let g = CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[qq, qp, qp, pp])).unwrap();
        let sigma = symplectic_spectrum(&g).unwrap()[0];
        let expect = (qq * pp - qp * qp).sqrt();
        assert!((sigma - expect).abs() < 1e-10 * expect, "{sigma} vs {expect}");
    }

    #[test]
    fn entropy_values() {
        assert_eq!(mode_entropy(0.5), 0.0);
        let one_and_half = mode_entropy(1.5);
        assert!((one_and_half - 2.0 * 2.0f64.ln()).abs() < 1e-14);
        assert!((one_and_half - 1.38629).abs() < 1e-5);
        // Asymptote at sigma = 1e6 agrees with the exact branch.
        let exact = mode_entropy_exact(1e6);
        let approx = mode_entropy_asymptote(1e6);
        assert!(((exact - approx) / exact).abs() < 1e-12);
        assert!((mode_entropy(1e6) - (1e6f64.ln() + 1.0)).abs() < 1e-6);
        assert!((1e6f64.ln() + 1.0 - 14.8155).abs() < 1e-4);
    }

    #[test]
    fn entropy_monotone_in_sigma() {
        let mut prev = mode_entropy(0.5);
        for i in 1..200 {
            let s = 0.5 + i as f64 * 0.05;
            let e = mode_entropy(s);
            assert!(e > prev, "sigma = {s}");
            prev = e;
        }
    }

    #[test]
    fn non_physical_matrix_is_reported() {
        let g = diag_cov(&[0.3, 0.3]);
        match symplectic_spectrum(&g) {
            Err(Error::NonPhysical { sigma }) => assert!((sigma - 0.3).abs() < 1e-12),
            other => panic!("expected NonPhysical, got {other:?}"),
        }
    }

    #[test]
    fn round_off_below_half_clamps() {
        let g = diag_cov(&[0.5 - 1e-9, 0.5 - 1e-9]);
        let s = symplectic_spectrum(&g).unwrap();
        assert_eq!(s, vec![0.5]);
    }

    #[test]
    fn restrict_is_identity_for_full_region() {
        let spec = QuenchSpec::chain(5, 2.0, -1.0).unwrap();
        let g = covariance(&spec, 0.7).unwrap();
        let all = Region::new((0..5).collect()).unwrap();
        let r = restrict(&g, &all).unwrap();
        assert_eq!(g.matrix(), r.matrix());
    }

    #[test]
    fn restrict_single_site_layout() {
        let spec = QuenchSpec::chain(3, 2.0, 1.0).unwrap();
        let g = covariance(&spec, 0.4).unwrap();
        let r = restrict(&g, &Region::new(vec![1]).unwrap()).unwrap();
        assert_eq!(r.matrix().nrows(), 2);
        assert_eq!(r.qq(0, 0), g.qq(1, 1));
        assert_eq!(r.pp(0, 0), g.pp(1, 1));
        assert_eq!(r.qp(0, 0), g.qp(1, 1));
    }

    #[test]
    fn spectrum_invariant_under_site_relabeling() {
        let spec = QuenchSpec::chain(21, 2.0, -1.0).unwrap();
        let g = covariance(&spec, 1.0).unwrap();
        let sorted = restrict_indices(&g, &[1, 5, 9]).unwrap();
        let permuted = restrict_indices(&g, &[9, 1, 5]).unwrap();
        let a = symplectic_spectrum(&sorted).unwrap();
        let b = symplectic_spectrum(&permuted).unwrap();
        assert_eq!(sorted.matrix().nrows(), 6);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10 * x.max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn restriction_matches_direct_submatrix_build() {
        let spec = QuenchSpec::chain(21, 2.0, -1.0).unwrap();
        let t = 1.3;
        let g = covariance(&spec, t).unwrap();
        let sites = vec![2, 3, 4, 11];
        let direct = covariance_for_sites(&spec, t, &sites).unwrap();
        let via_restrict = restrict(&g, &Region::new(sites).unwrap()).unwrap();
        assert_eq!(direct.matrix(), via_restrict.matrix());
    }

    #[test]
    fn deep_quench_initial_state_is_pure_product() {
        let spec = QuenchSpec {
            dims: 1,
            sites_per_dim: vec![21],
            spacing: 1.0,
            omega: None,
            m0: 1000.0,
            m_sq_final: -1.0,
            deep_quench: true,
        };
        let g = covariance(&spec, 0.0).unwrap();
        // Site-diagonal to leading order: qq ~ 1/(2 m0), pp ~ m0/2.
        assert!((g.qq(0, 0) * g.pp(0, 0) - 0.25).abs() < 1e-4);
        assert_eq!(g.qp(0, 0), 0.0);
        let s = symplectic_spectrum(&g).unwrap();
        for v in &s {
            assert!((v - 0.5).abs() < 1e-9, "{v}");
        }
        let block = Region::block(0, 4).unwrap();
        assert!(entropy(&g, &block).unwrap() < 1e-2);
        assert!((purity(&g) - 1.0).abs() < 1e-6);
        // Product state: disjoint regions share no information yet.
        let a = Region::new(vec![0, 1]).unwrap();
        let b = Region::new(vec![10, 11]).unwrap();
        assert!(mutual_information(&g, &a, &b).unwrap() < 1e-3);
    }

    #[test]
    fn mutual_information_basics() {
        let spec = QuenchSpec::chain(21, 3.0, -1.0).unwrap();
        let g = covariance(&spec, 1.5).unwrap();
        let a = Region::new(vec![0, 1, 2]).unwrap();
        let b = Region::new(vec![10, 11, 12]).unwrap();
        let iab = mutual_information(&g, &a, &b).unwrap();
        let iba = mutual_information(&g, &b, &a).unwrap();
        assert!(iab >= 0.0);
        assert!((iab - iba).abs() < 1e-9);
        // Overlap is rejected.
        let c = Region::new(vec![2, 3]).unwrap();
        assert!(matches!(mutual_information(&g, &a, &c), Err(Error::OverlappingRegions(2))));
    }

    #[test]
    fn region_validation() {
        assert!(Region::new(vec![]).is_err());
        assert!(Region::new(vec![3, 3]).is_err());
        assert!(Region::new(vec![4, 2]).is_err());
        let r = Region::new(vec![0, 2]).unwrap();
        assert_eq!(r.complement(5).unwrap().sites(), &[1, 3, 4]);
        let spec = QuenchSpec::chain(5, 1.0, 1.0).unwrap();
        let g = covariance(&spec, 0.0).unwrap();
        assert!(matches!(
            entropy(&g, &Region::new(vec![7]).unwrap()),
            Err(Error::SiteOutOfRange { .. })
        ));
    }

    #[test]
    fn spectrum_table_schema() {
        let table = spectrum_result(&[0.5, 1.25]);
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("index,sigma\n0."));
    }

    #[test]
    fn entropy_growth_guard() {
        let spec = QuenchSpec::chain(21, 1000.0, -1.0).unwrap();
        let region = Region::block(0, 1).unwrap();
        let err = entropy_growth(&spec, &region, &[0.0, 301.0], None);
        assert!(matches!(err, Err(Error::GrowthOverflow { .. })));
    }
}
