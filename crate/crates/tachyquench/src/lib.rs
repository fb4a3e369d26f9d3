//! Post-quench dynamics of a free bosonic lattice driven by a tachyonic
//! (negative mass-squared) Hamiltonian.
//!
//! The crate decomposes the problem the way the physics does:
//!
//! - [`mode`]: exact single-mode kernels (the scalar building blocks);
//! - [`lattice`]: momentum grids, dispersion relations and the
//!   [`lattice::QuenchSpec`] experiment parameterization;
//! - [`correlator`]: real-space equal-time two-point functions;
//! - [`gaussian`]: covariance matrices, symplectic spectra,
//!   entanglement entropy and mutual information;
//! - [`oracle`]: independent symplectic evolution used as ground truth
//!   by the test suites;
//! - [`lieb_robinson`]: emergent-velocity bounds on commutators and the
//!   harness comparing them against exact kernels;
//! - [`experiment`]: named, reproducible experiment runs behind the
//!   `tachyquench` command-line interface.

pub mod correlator;
pub mod error;
pub mod experiment;
mod fit;
mod fourier;
pub mod gaussian;
pub mod lattice;
pub mod lieb_robinson;
pub mod mode;
pub mod oracle;
pub mod output;

pub use error::{Error, Result};
