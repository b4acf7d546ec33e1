//! Zero counting and localization by the argument principle.
//!
//! The phase of F is tracked along rectangle edges with adaptive bisection, so the
//! winding number needs no derivative. Cells are subdivided until each holds a single
//! zero, which is then polished by Newton iteration.

mod contour;
mod density;
mod localize;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ComplexValue;

pub use contour::winding_number;
pub use density::{density_scan, DensityScan};
pub use localize::{critical_line_check, localize_zeros, CriticalLineReport, Localization, PoleCell, UnresolvedCell};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl Rectangle {
    pub fn new(sigma_lo: f64, sigma_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        let r = Rectangle { sigma_lo, sigma_hi, t_lo, t_hi };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.sigma_lo, self.sigma_hi, self.t_lo, self.t_hi].iter().all(|x| x.is_finite());
        if !finite || self.sigma_lo >= self.sigma_hi || self.t_lo >= self.t_hi {
            return Err(Error::InvalidConfig(format!(
                "rectangle needs sigma_lo < sigma_hi and t_lo < t_hi, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.sigma_hi - self.sigma_lo
    }

    pub fn height(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    pub fn size(&self) -> f64 {
        self.width().max(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.sigma_lo + self.sigma_hi), 0.5 * (self.t_lo + self.t_hi))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.sigma_lo && z.re <= self.sigma_hi && z.im >= self.t_lo && z.im <= self.t_hi
    }

    /// Strictly inside, at least `margin` from every edge.
    pub fn contains_inner(&self, z: Complex64, margin: f64) -> bool {
        z.re > self.sigma_lo + margin
            && z.re < self.sigma_hi - margin
            && z.im > self.t_lo + margin
            && z.im < self.t_hi - margin
    }

    pub fn inflate(&self, d: f64) -> Rectangle {
        Rectangle {
            sigma_lo: self.sigma_lo - d,
            sigma_hi: self.sigma_hi + d,
            t_lo: self.t_lo - d,
            t_hi: self.t_hi + d,
        }
    }

    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.sigma_lo, self.t_lo),
            Complex64::new(self.sigma_hi, self.t_lo),
            Complex64::new(self.sigma_hi, self.t_hi),
            Complex64::new(self.sigma_lo, self.t_hi),
        ]
    }

    /// Mirror image under complex conjugation.
    pub fn conj(&self) -> Rectangle {
        Rectangle { sigma_lo: self.sigma_lo, sigma_hi: self.sigma_hi, t_lo: -self.t_hi, t_hi: -self.t_lo }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourConfig {
    pub init_samples_per_edge: usize,
    pub max_phase_step: f64,
    pub max_depth: usize,
    pub min_cell: f64,
    pub jitter: f64,
    pub zero_tol: f64,
    /// Upper bound on the initial spacing of edge samples.
    pub max_sample_spacing: f64,
    /// Distance kept between any contour and a pole candidate.
    pub pole_clearance: f64,
    /// Lowest ordinate used when a search starts on the real axis.
    pub t_floor: f64,
    /// Right edge of density-scan regions.
    pub sigma_cap: f64,
    /// Height of density-scan tiles.
    pub tile_height: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig {
            init_samples_per_edge: 64,
            max_phase_step: PI / 2.0,
            max_depth: 40,
            min_cell: 1e-9,
            jitter: 1e-7,
            zero_tol: 1e-8,
            max_sample_spacing: 0.25,
            pole_clearance: 1e-2,
            t_floor: 0.05,
            sigma_cap: 2.0,
            tile_height: 10.0,
        }
    }
}

impl ContourConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.init_samples_per_edge < 2 {
            return bad("init_samples_per_edge must be at least 2");
        }
        if !(self.max_phase_step > 0.0 && self.max_phase_step < PI) {
            return bad("max_phase_step must lie in (0, pi)");
        }
        if self.max_depth == 0 {
            return bad("max_depth must be positive");
        }
        let positive = [
            self.min_cell,
            self.jitter,
            self.zero_tol,
            self.max_sample_spacing,
            self.pole_clearance,
            self.tile_height,
        ];
        if positive.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
            return bad("tolerances, spacings and sizes must be positive and finite");
        }
        if !(self.t_floor >= 0.0) {
            return bad("t_floor must be non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub location: ComplexValue,
    pub residual: f64,
    pub winding_mult: u32,
    /// The isolating cell.
    pub rect: Rectangle,
    pub refine_steps: u32,
}

impl ZeroRecord {
    pub fn z(&self) -> Complex64 {
        self.location.value
    }
}

/// Sort key (Im, Re) used for every emitted list.
pub(crate) fn by_im_re(a: Complex64, b: Complex64) -> std::cmp::Ordering {
    a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re))
}
