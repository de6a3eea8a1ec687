//! Direct and inverse spectral problems for Dirac and canonical systems.
//!
//! The crate is organised by problem rather than by data type:
//!
//! * [`gbdt`]: explicit systems built from finitely many parameter matrices,
//!   with closed-form states, Hamiltonians, fundamental solutions and rational
//!   Weyl functions.
//! * [`rational`]: the inverse of the above, from a state-space realization
//!   of a rational Weyl function back to parameters.
//! * [`structured`]: discretized operators with difference kernels, their
//!   triangular factorization, and everything recovered from it.
//! * [`fourier`]: passage between Weyl functions and amplitudes/accelerants.
//! * [`interpolation`]: recovery of a Weyl function from its values on a
//!   vertical lattice.
//! * [`check`]: a deterministic invariant suite over all of the above.

pub mod check;
pub mod error;
pub mod fourier;
pub mod gbdt;
pub mod grid;
pub mod interpolation;
pub mod io;
pub mod linalg;
pub mod quad;
pub mod rational;
pub mod structured;

pub use error::{Error, Result};
pub use fourier::{AmplitudeMode, TransformMode, WeylSampler};
pub use gbdt::{GbdtParams, GbdtState, GbdtSystem, ParamsReport, WeylPair};
pub use grid::{DifferenceKernel, GridFunction};
pub use linalg::CMat;
pub use rational::Realization;
pub use num_complex::Complex64;
