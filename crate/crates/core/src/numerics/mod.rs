//! Complex evaluation of Hurwitz, Riemann and completed zeta, log-Gamma, and
//! the exact constant tables they rely on.

mod config;
mod gamma;
mod hurwitz;
pub mod tables;
mod value;

pub use config::{EvalConfig, MAX_EM_ORDER};
pub use gamma::{completed_zeta, log_gamma};
pub use hurwitz::{
    default_cutoff, hurwitz_em, hurwitz_zeta, hurwitz_zeta_shifted, riemann_zeta, EmEvaluation,
};
pub(crate) use hurwitz::pow_neg;
pub use tables::{tables, ConstantTables};
pub use value::ComplexValue;
