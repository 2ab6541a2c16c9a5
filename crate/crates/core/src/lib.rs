//! One-dimensional Dirac equation with complex PT-symmetric vector,
//! scalar and pseudoscalar potentials.

pub mod analytic;
pub mod boundstates;
pub mod error;
pub mod exprdsl;
pub mod formalism;
pub mod integrator;
pub mod potentials;
pub mod quadrature;
pub mod susy;
pub mod sweep;
pub mod verify;

#[cfg(test)]
mod proptests;

pub use error::{Error, Result};
pub use num_complex::Complex64;
