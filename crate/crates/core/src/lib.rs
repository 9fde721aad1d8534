//! Exact dynamics of finite Glauber-Fock photonic lattices.
//!
//! A Glauber-Fock lattice is a chain of `N` identical waveguides in which the
//! coupling between waveguide `j` and `j + 1` is `sqrt(j + 1)` (units of the
//! base coupling `g`, time in units of `1/g`). The coupling matrix is a Jacobi
//! matrix whose eigenvalues are `sqrt(2)` times the zeros of the physicists'
//! Hermite polynomial `H_N`, and whose eigenvectors are orthonormal Hermite
//! sequences evaluated at those eigenvalues. Everything downstream, from the
//! propagator `U(t)` to two-photon correlation maps, is built on that closed
//! form.
//!
//! Module map:
//!
//! * [`specfun`] Hermite and Laguerre evaluation, including an exponent-tracked
//!   orthonormal Hermite recurrence that does not overflow at large degree.
//! * [`spectral`] coupling matrix and its spectral decomposition.
//! * [`propagator`] `U(t) = V^T exp(-i Lambda t) V` and collective modes.
//! * [`states`] input states and every observable computed from `U(t)`.
//! * [`limits`] semi-infinite lattice intensities and finite/infinite comparison.
//! * [`oracle`] dense matrix exponential and Sturm-sequence bisection, used to
//!   validate the closed form independently.
//! * [`verify`] the oracle suite bundled as a pass/fail report.
//!
//! Batch work (roots, time samples) runs on rayon when the `parallel` feature
//! is enabled; [`Execution::Sequential`] forces the single-threaded path.

pub mod config;
pub mod error;
pub mod exec;
pub mod limits;
pub mod oracle;
pub mod propagator;
pub mod specfun;
pub mod spectral;
pub mod states;
pub mod verify;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use exec::Execution;
pub use propagator::{propagator_at, propagator_series, Propagator, TimeGrid};
pub use spectral::{eigen_decompose, CouplingMatrix, LatticeSpec, SpectralDecomposition};
pub use states::{CorrelationMap, InputState};
