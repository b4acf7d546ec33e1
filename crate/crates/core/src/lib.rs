//! Evaluation and zero search for zeta-function families.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: Hurwitz/Riemann zeta by Euler–Maclaurin, log-Gamma,
//!   completed zeta, and exact Bernoulli/Stirling/binomial tables.
//! - [`families`]: closed-form reductions of multiple zeta families (Euler–Zagier
//!   diagonal, Barnes, sphere spectral, symmetric-matrix) to zeta atoms, with
//!   direct-summation oracles valid where the series converge absolutely.
//! - [`expr`]: a small expression language over zeta atoms and general Dirichlet
//!   polynomials, with pole bookkeeping.
//! - [`zeros`]: argument-principle winding numbers, zero localization by
//!   quadrisection and Newton refinement, and zero-density scans.

pub mod error;
pub mod expr;
pub mod families;
pub mod numerics;
pub mod zeros;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numerics::{ComplexValue, EvalConfig};
