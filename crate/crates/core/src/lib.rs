//! Numerical laboratory for the one-dimensional compressible barotropic
//! Navier-Stokes equations
//!
//! ```text
//! rho_t + (rho u)_x = 0
//! (rho u)_t + (rho u^2)_x + P(rho)_x - (mu(rho) u_x)_x = rho f(x)
//! ```
//!
//! on `(0, 1)` with no-slip walls, `P = A rho^gamma` and a viscosity bounded
//! below by a positive constant, so that initial data may contain vacuum.
//!
//! The crate provides the constitutive laws ([`model`]), a staggered mesh
//! ([`grid`]), the stationary density ([`stationary`]), a vacuum-tolerant
//! semi-implicit time stepper ([`solver`]), the functionals used to study the
//! long-time behaviour ([`diagnostics`]), and a config-driven runner ([`cli`]).

// `!(x > 0.0)` and friends are deliberate: they reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod interp;
pub mod model;
pub mod num;
pub mod solver;
pub mod stationary;

pub use error::{Error, Result};
