//! Numerical laboratory for the quantum condition of matrix mechanics.
//!
//! * [`spectral`] builds spectra and hermitian coordinate/momentum matrices.
//! * [`eigen`] is the cyclic Jacobi solver used for general potentials.
//! * [`conditions`] evaluates the competing forms of the quantum condition
//!   and the commutator diagnostics.
//! * [`classical`] handles classical periodic orbits, action integrals,
//!   Bohr-Sommerfeld quantization and correspondence comparisons.
//! * [`verify`] bundles the self-check suite run by `mmlab verify`.

pub mod classical;
pub mod conditions;
pub mod eigen;
pub mod error;
pub mod potential;
pub mod quadrature;
pub mod spectral;
pub mod verify;

pub use error::{LabError, Result};
pub use num_complex::Complex64;

/// Dense complex matrix used for `X`, `P` and commutators.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Dense real matrix.
pub type RMatrix = nalgebra::DMatrix<f64>;
