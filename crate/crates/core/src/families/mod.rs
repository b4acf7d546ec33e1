//! Zeta families reduced to Riemann and Hurwitz atoms, with direct-sum oracles.

pub mod barnes;
pub mod euler_zagier;
pub mod hoffman;
pub mod linear_form;
pub mod sphere;
mod sum;
pub mod symmat;

pub use barnes::{barnes_coeffs, barnes_coeffs_exact, barnes_direct, barnes_zeta, BarnesParams};
pub use euler_zagier::{ez_direct, EZ_DIRECT_MIN_RE};
pub use hoffman::{ez_diagonal, hoffman_diagonal_coeffs, PartitionTerm, HOFFMAN_MAX_R};
pub use linear_form::{linear_form_eval, IndexOffset, LinearFormSeries};
pub use sphere::{sphere_closed_form, sphere_direct, sphere_mult_poly, sphere_spectral, SphereParams};
pub use symmat::{symmat_zeta, Lattice, SymMatrixParams};
