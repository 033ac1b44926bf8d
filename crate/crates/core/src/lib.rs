//! Numerical laboratory for the orbital stability of degree-2
//! Rossby–Haurwitz waves of the incompressible Euler equation on the sphere.
//!
//! The crate is organised bottom-up:
//!
//! * [`harmonics`]: real spherical harmonics, Gauss–Legendre grids,
//!   transforms, shell projectors and norms.
//! * [`polysphere`]: exact polynomials on S² with polynomial coefficients in
//!   the state parameters; regenerates closed-form Casimirs and Jacobians.
//! * [`dynamics`]: Rossby–Haurwitz waves, a dealiased pseudo-spectral solver
//!   and conservation diagnostics.
//! * [`reduction`]: the quadratic-form description of the second shell, its
//!   rotation group action, canonical forms and orbital distances.
//! * [`stability`]: rank, fold and inverse-function constants of Casimir maps,
//!   the high-shell bound check and log-log exponent fits.
//! * [`lab`]: perturbations, experiment orchestration, verification suites
//!   and persistence.

pub mod dynamics;
pub mod error;
pub mod harmonics;
pub mod lab;
pub mod polysphere;
pub mod reduction;
pub mod stability;

pub use error::{Error, Result};
pub use harmonics::{Grid, GridField, ShellSelector, SpectralField};
