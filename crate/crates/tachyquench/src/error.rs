//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("non-finite input for {what}: {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("frequency omega0 must be positive, got {0}")]
    NonPositiveFrequency(f64),

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    /// Growth factor xi*t beyond which cosh-type kernels overflow f64.
    #[error("growth factor xi*t = {xi_t} exceeds the overflow guard {limit} (t = {t})")]
    GrowthOverflow { xi_t: f64, limit: f64, t: f64 },

    #[error("kernel evaluation overflowed to a non-finite value at t = {t}")]
    NonFiniteResult { t: f64 },

    #[error("beta_eff is undefined for non-stable modes (omega = {0})")]
    BetaEffUnstable(f64),

    #[error("invalid quench spec: {0}")]
    InvalidSpec(String),

    #[error("sites_per_dim must be odd, got {0}")]
    EvenSites(usize),

    #[error("momentum vector has {got} components, lattice has {expected} dimensions")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("displacement {0:?} is outside the lattice")]
    DisplacementOutOfRange(Vec<i64>),

    #[error("operation requires a tachyonic quench (m_sq_final < 0), got {0}")]
    NotTachyonic(f64),

    #[error("coupling lambda must be positive, got {0}")]
    NonPositiveCoupling(f64),

    #[error("correlator is non-positive ({value}) at t = {t}; log-slope fit undefined")]
    NonPositiveCorrelator { t: f64, value: f64 },

    #[error("fit window needs at least two samples, got {0}")]
    FitWindowTooSmall(usize),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("region site {index} out of range for {sites} sites")]
    SiteOutOfRange { index: usize, sites: usize },

    #[error("regions overlap at site {0}")]
    OverlappingRegions(usize),

    #[error("covariance matrix must be even-dimensional and square, got {rows}x{cols}")]
    BadCovarianceShape { rows: usize, cols: usize },

    #[error("non-physical covariance: symplectic eigenvalue {sigma} below 1/2 - 1e-6")]
    NonPhysical { sigma: f64 },

    #[error("symplectic pairing mismatch: +{plus} vs -{minus}")]
    PairingMismatch { plus: f64, minus: f64 },

    #[error("expected {expected} symplectic eigenvalue pairs, resolved {got}")]
    PairingCount { expected: usize, got: usize },

    #[error("mutual information {0} below the subadditivity round-off floor")]
    SubadditivityViolated(f64),

    #[error("Lieb-Robinson bound requires 4*d*Omega^2 > |m^2| (got {lhs} vs {rhs})")]
    BandTooNarrow { lhs: f64, rhs: f64 },

    #[error("commutator bound is only valid outside the cone: e*tau = {e_tau} >= 2*distance = {two_d}")]
    InsideCone { e_tau: f64, two_d: f64 },
}
