//! Discontinuous Galerkin discretisation of the quasi-incompressible
//! two-phase Navier-Stokes-Korteweg phase-field model.
//!
//! The fully discrete scheme is a Crank-Nicolson type midpoint rule in six
//! fields `(phi, v, lambda, a, b, q)`. It conserves mass exactly and satisfies a
//! discrete energy-dissipation equality up to the Newton tolerance.

pub mod ad;
pub mod cli;
pub mod dgspace;
pub mod diagnostics;
pub mod error;
pub mod forms;
pub mod mesh;
pub mod model;
pub mod scheme;

pub use error::{Error, Result};
