//! Brute-force symplectic evolution of Gaussian states.
//!
//! This is the ground truth the analytic paths are tested against, so it
//! deliberately shares no code with the single-mode kernels. Everything
//! is built from the Heisenberg evolution generated by
//! `H = (1/2) (p.p + q.X.q)`:
//!
//! ```text
//! S(t) = [ cos(sqrt(X) t)            X^{-1/2} sin(sqrt(X) t) ]
//!        [ -X^{1/2} sin(sqrt(X) t)   cos(sqrt(X) t)          ]
//! ```
//!
//! `cos(sqrt(l) t)` and `sin(sqrt(l) t)/sqrt(l)` are entire in `l`, so
//! the matrix functions are well defined for negative eigenvalues
//! (cosh/sinh branches) and at `l = 0`; the evolution stays symplectic
//! even though `H` is unbounded from below.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fourier::{flatten_site, unflatten_site, ModeSum};
use crate::gaussian::CovarianceMatrix;
use crate::lattice::{QuenchSpec, WhichMass};

/// Quadratic Hamiltonian with unit momentum couplings and a symmetric
/// position-coupling matrix, eagerly diagonalized.
#[derive(Debug, Clone)]
pub struct QuadraticHamiltonian {
    coupling: DMatrix<f64>,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    /// Present when the coupling is the circulant lattice form; enables
    /// the Fourier-diagonalized commutator kernel.
    circulant: Option<Circulant>,
}

#[derive(Debug, Clone)]
struct Circulant {
    sum: ModeSum,
    /// omega_k^2 in grid order.
    band: Vec<f64>,
    sites: Vec<usize>,
}

impl QuadraticHamiltonian {
    /// Nearest-neighbour lattice Hamiltonian: circulant `X` with
    /// diagonal `m^2 + 2 d Omega^2` and `-Omega^2` along each axis.
    pub fn from_spec(spec: &QuenchSpec, which: WhichMass) -> Result<Self> {
        spec.validate()?;
        let n = spec.total_sites();
        let omega_sq = spec.omega() * spec.omega();
        let m_sq = match which {
            WhichMass::Initial => spec.m0 * spec.m0,
            WhichMass::Final => spec.m_sq_final,
        };
        let sites: Vec<usize> = (0..spec.dims).map(|s| spec.sites(s)).collect();
        let mut x = DMatrix::zeros(n, n);
        for i in 0..n {
            x[(i, i)] += m_sq + 2.0 * spec.dims as f64 * omega_sq;
            let coords = unflatten_site(i, &sites);
            for dim in 0..spec.dims {
                for step in [-1i64, 1] {
                    let mut c = coords.clone();
                    c[dim] = (c[dim] + step).rem_euclid(sites[dim] as i64);
                    let j = flatten_site(&c, &sites);
                    x[(i, j)] -= omega_sq;
                }
            }
        }
        // Independent dispersion for the Fourier path: recomputed here
        // rather than borrowed from the mode kernels.
        let band: Vec<f64> = spec
            .mode_numbers()
            .iter()
            .map(|nv| {
                let s: f64 = nv
                    .iter()
                    .zip(&sites)
                    .map(|(&ns, &len)| {
                        let v = (std::f64::consts::PI * ns as f64 / len as f64).sin();
                        4.0 * v * v
                    })
                    .sum();
                m_sq + omega_sq * s
            })
            .collect();
        let circulant = Some(Circulant { sum: ModeSum::new(spec), band, sites });
        Ok(Self::diagonalize(x, circulant))
    }

    /// Arbitrary symmetric position-coupling matrix.
    pub fn from_matrix(x: DMatrix<f64>) -> Result<Self> {
        if !x.is_square() {
            return Err(Error::BadCovarianceShape { rows: x.nrows(), cols: x.ncols() });
        }
        let max_asym = (&x - x.transpose()).abs().max();
        if max_asym > 0.0 {
            return Err(Error::InvalidSpec(format!(
                "coupling matrix must be symmetric (max asymmetry {max_asym:e})"
            )));
        }
        Ok(Self::diagonalize(x, None))
    }

    fn diagonalize(x: DMatrix<f64>, circulant: Option<Circulant>) -> Self {
        let eig = x.clone().symmetric_eigen();
        Self { coupling: x, eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors, circulant }
    }

    pub fn modes(&self) -> usize {
        self.coupling.nrows()
    }

    pub fn coupling(&self) -> &DMatrix<f64> {
        &self.coupling
    }

    /// Eigenvalues of the coupling matrix (unsorted).
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    fn check_growth(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::NonFinite { what: "t", value: t });
        }
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        let min = self.eigenvalues.min();
        if min < 0.0 {
            let xi_t = (-min).sqrt() * t;
            if xi_t > crate::mode::GROWTH_LIMIT {
                return Err(Error::GrowthOverflow { xi_t, limit: crate::mode::GROWTH_LIMIT, t });
            }
        }
        Ok(())
    }

    /// Apply a scalar function of the eigenvalues: V f(L) V^T.
    fn matrix_function(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let d = DVector::from_iterator(self.eigenvalues.len(), self.eigenvalues.iter().map(|&l| f(l)));
        &self.eigenvectors * DMatrix::from_diagonal(&d) * self.eigenvectors.transpose()
    }

    /// The 2M x 2M symplectic evolution matrix S(t).
    pub fn evolution_matrix(&self, t: f64) -> Result<DMatrix<f64>> {
        self.check_growth(t)?;
        let m = self.modes();
        let cos = self.matrix_function(|l| cos_sqrt(l, t));
        let sinc = self.matrix_function(|l| sinc_sqrt(l, t));
        let lsinc = self.matrix_function(|l| l * sinc_sqrt(l, t));
        let mut s = DMatrix::zeros(2 * m, 2 * m);
        for i in 0..m {
            for j in 0..m {
                s[(i, j)] = cos[(i, j)];
                s[(i, m + j)] = sinc[(i, j)];
                s[(m + i, j)] = -lsinc[(i, j)];
                s[(m + i, m + j)] = cos[(i, j)];
            }
        }
        Ok(s)
    }

    /// Evolve a raw symmetric second-moment matrix: S(t) G S(t)^T,
    /// re-symmetrized exactly. The caller is responsible for handing in
    /// a physical state when physicality matters.
    pub fn evolve_raw(&self, g0: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
        let expect = 2 * self.modes();
        if g0.nrows() != expect || g0.ncols() != expect {
            return Err(Error::BadCovarianceShape { rows: g0.nrows(), cols: g0.ncols() });
        }
        let s = self.evolution_matrix(t)?;
        let g = &s * g0 * s.transpose();
        Ok(0.5 * (&g + g.transpose()))
    }

    /// Heisenberg-evolved covariance matrix.
    pub fn evolve_covariance(&self, g0: &CovarianceMatrix, t: f64) -> Result<CovarianceMatrix> {
        CovarianceMatrix::new(self.evolve_raw(g0.matrix(), t)?)
    }

    /// Ground-state covariance diag(X^{-1/2}/2, X^{1/2}/2); the coupling
    /// must be positive definite.
    pub fn ground_covariance(&self) -> Result<CovarianceMatrix> {
        let min = self.eigenvalues.min();
        if min <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "ground state needs a positive-definite coupling (min eigenvalue {min:e})"
            )));
        }
        let m = self.modes();
        let qq = self.matrix_function(|l| 0.5 / l.sqrt());
        let pp = self.matrix_function(|l| 0.5 * l.sqrt());
        let mut g = DMatrix::zeros(2 * m, 2 * m);
        for i in 0..m {
            for j in 0..m {
                g[(i, j)] = qq[(i, j)];
                g[(m + i, m + j)] = pp[(i, j)];
            }
        }
        CovarianceMatrix::new(0.5 * (&g + g.transpose()))
    }

    /// Equal-time commutator kernel `i [q_n(t), q_m] = [X^{-1/2} sin(sqrt(X) t)]_{nm}`.
    ///
    /// Circulant couplings use the Fourier diagonalization; general ones
    /// the dense eigendecomposition.
    pub fn exact_commutator_kernel(&self, t: f64) -> Result<DMatrix<f64>> {
        self.check_growth(t)?;
        if let Some(c) = &self.circulant {
            let values: Vec<f64> = c.band.iter().map(|&l| sinc_sqrt(l, t)).collect();
            let n = self.modes();
            let mut out = DMatrix::zeros(n, n);
            let mut cache: std::collections::HashMap<usize, f64> = std::collections::HashMap::new();
            for i in 0..n {
                let ci = unflatten_site(i, &c.sites);
                for j in 0..=i {
                    let cj = unflatten_site(j, &c.sites);
                    let delta: Vec<i64> = ci.iter().zip(&cj).map(|(a, b)| a - b).collect();
                    let key = c.sum.class_key(&delta);
                    let v = *cache.entry(key).or_insert_with(|| c.sum.sum(&values, &delta));
                    out[(i, j)] = v;
                    out[(j, i)] = v;
                }
            }
            Ok(out)
        } else {
            Ok(self.matrix_function(|l| sinc_sqrt(l, t)))
        }
    }
}

/// Graph (taxicab) distance between two flattened sites of the periodic
/// lattice described by `spec`.
pub fn graph_distance(spec: &QuenchSpec, i: usize, j: usize) -> usize {
    let sites: Vec<usize> = (0..spec.dims).map(|s| spec.sites(s)).collect();
    let a = unflatten_site(i, &sites);
    let b = unflatten_site(j, &sites);
    a.iter()
        .zip(&b)
        .zip(&sites)
        .map(|((&x, &y), &n)| {
            let d = (x - y).rem_euclid(n as i64) as usize;
            d.min(n - d)
        })
        .sum()
}

/// True when `s` preserves the symplectic form to 1e-9 in max norm.
pub fn symplectic_check(s: &DMatrix<f64>) -> bool {
    let n = s.nrows();
    if n != s.ncols() || !n.is_multiple_of(2) {
        return false;
    }
    let m = n / 2;
    let mut omega = DMatrix::zeros(n, n);
    for i in 0..m {
        omega[(i, m + i)] = 1.0;
        omega[(m + i, i)] = -1.0;
    }
    let residual = s * &omega * s.transpose() - &omega;
    residual.abs().max() <= 1e-9
}

/// cos(sqrt(l) t), entire in l.
fn cos_sqrt(lambda: f64, t: f64) -> f64 {
    let x = lambda * t * t;
    if x.abs() < 1e-8 {
        1.0 - x / 2.0 + x * x / 24.0
    } else if lambda > 0.0 {
        (lambda.sqrt() * t).cos()
    } else {
        ((-lambda).sqrt() * t).cosh()
    }
}

/// sin(sqrt(l) t)/sqrt(l), entire in l; equals t at l = 0.
fn sinc_sqrt(lambda: f64, t: f64) -> f64 {
    let x = lambda * t * t;
    if x.abs() < 1e-8 {
        t * (1.0 - x / 6.0 + x * x / 120.0)
    } else if lambda > 0.0 {
        let w = lambda.sqrt();
        (w * t).sin() / w
    } else {
        let xi = (-lambda).sqrt();
        (xi * t).sinh() / xi
    }
}
