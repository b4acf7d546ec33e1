use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by evaluators, the expression front end and the zero engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point} is within {distance:e} of the pole of {source_name} at {pole}")]
    PoleProximity {
        point: Complex64,
        pole: Complex64,
        distance: f64,
        source_name: String,
    },

    #[error("error target {target:e} unreachable within {max_terms} terms (best bound {achieved:e})")]
    BudgetExceeded {
        target: f64,
        achieved: f64,
        max_terms: usize,
    },

    #[error("outside the region of absolute convergence: {0}")]
    NotInConvergenceRegion(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown function `{name}` at byte {pos}")]
    UnknownFamily { name: String, pos: usize },

    #[error("wrong arguments for `{name}`: {msg}")]
    Arity { name: String, msg: String },

    #[error("|F| = {magnitude:e} at contour point {point} is indistinguishable from zero")]
    NearZeroOnContour { point: Complex64, magnitude: f64 },

    #[error("pole candidate {pole} lies on the contour")]
    PoleOnContour { pole: Complex64 },

    #[error("phase tracking could not resolve the contour near {point}")]
    DepthExceeded { point: Complex64 },
}

pub type Result<T> = std::result::Result<T, Error>;
