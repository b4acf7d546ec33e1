use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{ContourConfig, Rectangle};
use crate::error::{Error, Result};
use crate::expr::{eval_expr, ZetaExpr};
use crate::numerics::EvalConfig;

// Hard cap on bisection of a single sample interval.
const MAX_BISECT: usize = 48;
// Samples whose magnitude is within this multiple of the error bound carry no phase.
const NOISE_FACTOR: f64 = 4.0;

/// Evaluates F with the contour conventions: poles become `PoleOnContour`, values
/// lost in their own error bound become `NearZeroOnContour`.
pub(crate) struct Sampler<'a> {
    pub expr: &'a ZetaExpr,
    pub eval: &'a EvalConfig,
    pub contour: &'a ContourConfig,
}

impl Sampler<'_> {
    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        match eval_expr(self.expr, z, self.eval) {
            Ok(v) => Ok(v.value),
            Err(Error::PoleProximity { pole, .. }) => Err(Error::PoleOnContour { pole }),
            Err(e) => Err(e),
        }
    }

    pub fn sample(&self, z: Complex64) -> Result<Complex64> {
        let v = match eval_expr(self.expr, z, self.eval) {
            Ok(v) => v,
            Err(Error::PoleProximity { pole, .. }) => return Err(Error::PoleOnContour { pole }),
            Err(e) => return Err(e),
        };
        let mag = v.norm();
        if !mag.is_finite() || mag <= NOISE_FACTOR * v.abs_err || mag == 0.0 {
            return Err(Error::NearZeroOnContour { point: z, magnitude: mag });
        }
        Ok(v.value)
    }

    fn segment(&self, za: Complex64, fa: Complex64, zb: Complex64, fb: Complex64, depth: usize) -> Result<f64> {
        let d = (fb / fa).arg();
        if d.abs() <= self.contour.max_phase_step {
            return Ok(d);
        }
        let zm = 0.5 * (za + zb);
        let min_seg = (1e-2 * self.contour.min_cell).max(1e-13 * (1.0 + zm.norm()));
        if depth >= MAX_BISECT || (zb - za).norm() < min_seg {
            return Err(Error::NearZeroOnContour { point: zm, magnitude: fa.norm().min(fb.norm()) });
        }
        let fm = self.sample(zm)?;
        Ok(self.segment(za, fa, zm, fm, depth + 1)? + self.segment(zm, fm, zb, fb, depth + 1)?)
    }

    /// Continuous change of arg F along the segment from `a` to `b`.
    ///
    /// Sampling always runs from the lexicographically smaller endpoint, so an edge
    /// shared by two cells contributes exactly opposite amounts to each.
    pub fn edge_phase(&self, a: Complex64, b: Complex64) -> Result<f64> {
        let forward = (a.re, a.im) <= (b.re, b.im);
        let (p, q) = if forward { (a, b) } else { (b, a) };
        let len = (q - p).norm();
        let n = self
            .contour
            .init_samples_per_edge
            .max((len / self.contour.max_sample_spacing).ceil() as usize);
        let mut z_prev = p;
        let mut f_prev = self.sample(p)?;
        let mut total = 0.0;
        for k in 1..=n {
            let z = if k == n { q } else { p + (q - p) * (k as f64 / n as f64) };
            let f = self.sample(z)?;
            total += self.segment(z_prev, f_prev, z, f, 0)?;
            z_prev = z;
            f_prev = f;
        }
        Ok(if forward { total } else { -total })
    }

    /// Total phase change around the positively oriented boundary.
    pub fn boundary_phase(&self, rect: &Rectangle) -> Result<f64> {
        let c = rect.corners();
        let mut total = 0.0;
        for i in 0..4 {
            total += self.edge_phase(c[i], c[(i + 1) % 4])?;
        }
        Ok(total)
    }

    pub fn winding(&self, rect: &Rectangle) -> Result<i64> {
        let total = self.boundary_phase(rect)?;
        phase_to_winding(total, rect)
    }
}

pub(crate) fn phase_to_winding(total: f64, rect: &Rectangle) -> Result<i64> {
    let w = (total / TAU).round();
    if (total - w * TAU).abs() > 0.01 {
        return Err(Error::DepthExceeded { point: rect.center() });
    }
    Ok(w as i64)
}

/// Zeros minus poles of F inside `rect`, counted with multiplicity.
///
/// Fails with `NearZeroOnContour` when a boundary sample cannot be told apart from
/// zero and with `PoleOnContour` when the boundary passes through a pole; in both
/// cases the caller should move the contour.
pub fn winding_number(e: &ZetaExpr, rect: &Rectangle, contour: &ContourConfig, eval: &EvalConfig) -> Result<i64> {
    rect.validate()?;
    contour.validate()?;
    eval.validate()?;
    Sampler { expr: e, eval, contour }.winding(rect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn wind(src: &str, r: Rectangle) -> Result<i64> {
        let e = parse_expr(src).unwrap();
        winding_number(&e, &r, &ContourConfig::default(), &EvalConfig::default())
    }

    #[test]
    fn first_zeta_zero_cell() {
        assert_eq!(wind("zeta(s)", Rectangle::new(0.4, 0.6, 14.0, 14.3).unwrap()).unwrap(), 1);
    }

    #[test]
    fn zero_free_cell() {
        assert_eq!(wind("zeta(s)", Rectangle::new(2.0, 3.0, 1.0, 2.0).unwrap()).unwrap(), 0);
    }

    #[test]
    fn pole_counts_negative() {
        assert_eq!(wind("zeta(s)", Rectangle::new(0.8, 1.2, -0.2, 0.2).unwrap()).unwrap(), -1);
    }

    #[test]
    fn squared_zero_counts_twice() {
        assert_eq!(wind("zeta(s)^2", Rectangle::new(0.4, 0.6, 14.0, 14.3).unwrap()).unwrap(), 2);
    }

    #[test]
    fn trivial_zero() {
        assert_eq!(wind("zeta(s)", Rectangle::new(-2.5, -1.5, -0.5, 0.5).unwrap()).unwrap(), 1);
    }

    #[test]
    fn zero_on_contour_is_reported() {
        let r = Rectangle::new(0.5, 0.6, 14.0, 14.3).unwrap();
        let err = wind("zeta(s)", r).unwrap_err();
        assert!(matches!(err, Error::NearZeroOnContour { .. }), "{err}");
    }

    #[test]
    fn pole_on_contour_is_reported() {
        let r = Rectangle::new(1.0, 1.5, -0.5, 0.5).unwrap();
        let err = wind("zeta(s)", r).unwrap_err();
        assert!(matches!(err, Error::PoleOnContour { .. }), "{err}");
    }

    #[test]
    fn shared_edges_cancel() {
        let e = parse_expr("zeta(s)").unwrap();
        let s = Sampler { expr: &e, eval: &EvalConfig::default(), contour: &ContourConfig::default() };
        let a = Complex64::new(0.3, 20.0);
        let b = Complex64::new(0.9, 21.0);
        assert_eq!(s.edge_phase(a, b).unwrap(), -s.edge_phase(b, a).unwrap());
    }
}
