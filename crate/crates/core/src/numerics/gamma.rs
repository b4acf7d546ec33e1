use std::f64::consts::PI;

use num_complex::Complex64;

use super::hurwitz::riemann_zeta;
use super::tables::tables;
use super::{ComplexValue, EvalConfig};
use crate::error::{Error, Result};

/// Real part above which the Stirling series is used directly.
const SHIFT_THRESHOLD: f64 = 12.0;
const STIRLING_TERMS: usize = 10;

/// Principal branch of log Γ(z): upward recurrence to Re(z) ≥ 12, then Stirling.
pub fn log_gamma(z: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    if z.re < 0.5 {
        let nearest = z.re.round();
        let distance = (z - Complex64::new(nearest, 0.0)).norm();
        if nearest <= 0.0 && distance < cfg.pole_guard {
            return Err(Error::PoleProximity {
                point: z,
                pole: Complex64::new(nearest, 0.0),
                distance,
                source_name: "gamma".into(),
            });
        }
    }

    let mut shifted = z;
    let mut correction = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    while shifted.re < SHIFT_THRESHOLD {
        let l = shifted.ln();
        correction += l;
        magnitude += l.norm();
        shifted += 1.0;
    }

    let t = tables();
    let ln_w = shifted.ln();
    let mut series = (shifted - 0.5) * ln_w - shifted + 0.5 * (2.0 * PI).ln();
    magnitude += series.norm();
    let inv = 1.0 / shifted;
    let inv2 = inv * inv;
    let mut power = inv;
    for k in 1..=STIRLING_TERMS {
        let kf = k as f64;
        let b = t.bernoulli_f64(2 * k);
        series += b / (2.0 * kf * (2.0 * kf - 1.0)) * power;
        power *= inv2;
    }
    let value = series - correction;
    Ok(ComplexValue::new(value, 4.0 * f64::EPSILON * magnitude))
}

/// ζ*(s) = π^{-s/2} Γ(s/2) ζ(s).
pub fn completed_zeta(s: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    for pole in [0.0, 1.0] {
        let p = Complex64::new(pole, 0.0);
        let distance = (s - p).norm();
        if distance < cfg.pole_guard {
            return Err(Error::PoleProximity {
                point: s,
                pole: p,
                distance,
                source_name: "xi".into(),
            });
        }
    }
    let lg = log_gamma(s / 2.0, cfg)?;
    let exponent = lg.value - s / 2.0 * PI.ln();
    let prefactor = exponent.exp();
    let exp_err = lg.abs_err + f64::EPSILON * (s.norm() * PI.ln() + exponent.norm());
    let zeta = riemann_zeta(s, cfg)?;
    let value = prefactor * zeta.value;
    let abs_err = prefactor.norm() * zeta.abs_err + value.norm() * exp_err;
    Ok(ComplexValue::new(value, abs_err))
}
