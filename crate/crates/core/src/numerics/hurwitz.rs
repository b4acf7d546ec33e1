//! Hurwitz and Riemann zeta functions by Euler–Maclaurin summation.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::log_gamma;
use super::tables::tables;
use super::{ComplexValue, EvalConfig, MAX_EM_ORDER};
use crate::error::{Error, Result};

/// Result of one Euler–Maclaurin evaluation at fixed cutoff and order.
#[derive(Debug, Clone, Copy)]
pub struct EmEvaluation {
    pub value: ComplexValue,
    /// Truncation bound alone (2 x first omitted term), without rounding.
    pub truncation_bound: f64,
    pub cutoff: usize,
    pub order: usize,
}

/// Cutoff used for the first attempt at `s`.
pub fn default_cutoff(s: Complex64) -> usize {
    let from_height = (1.3 * s.im.abs()).ceil() as usize + 10;
    from_height.max(20)
}

/// `(n + a)^(-s)` via the real logarithm of `n + a > 0`.
#[inline]
pub(crate) fn pow_neg(base: f64, s: Complex64) -> Complex64 {
    let l = base.ln();
    Complex64::from_polar((-s.re * l).exp(), -s.im * l)
}

/// Euler–Maclaurin evaluation of ζ(s, a) with explicit cutoff `n` and order `m`.
pub fn hurwitz_em(s: Complex64, a: f64, n: usize, m: usize) -> EmEvaluation {
    let t = tables();
    let m = m.clamp(1, t.bernoulli_len() / 2 - 2);

    let mut sum = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for k in 0..n {
        let term = pow_neg(k as f64 + a, s);
        magnitude += term.norm();
        sum += term;
    }

    let x = n as f64 + a;
    let x_pow = pow_neg(x, s);
    let one = Complex64::new(1.0, 0.0);
    let integral = x_pow * x / (s - one);
    let half = 0.5 * x_pow;
    sum += integral + half;
    magnitude += integral.norm() + half.norm();

    // pochhammer (s)_{2k-1} times x^{-s-2k+1}
    let inv_x2 = 1.0 / (x * x);
    let mut poch = s;
    let mut x_factor = x_pow / x;
    let mut omitted = Complex64::new(0.0, 0.0);
    for k in 1..=m + 1 {
        let term = t.em_coeff(k) * poch * x_factor;
        if k <= m {
            sum += term;
            magnitude += term.norm();
        } else {
            omitted = term;
        }
        let kf = k as f64;
        poch *= (s + (2.0 * kf - 1.0)) * (s + 2.0 * kf);
        x_factor *= inv_x2;
    }

    let mf = m as f64;
    let shape = (s + (2.0 * mf + 1.0)).norm() / (s.re + 2.0 * mf + 1.0).max(0.5);
    let truncation = 2.0 * omitted.norm() * shape.max(1.0);
    let rounding = f64::EPSILON * magnitude * (4.0 + s.norm() * x.ln().max(1.0));

    let err = truncation + rounding;
    EmEvaluation {
        value: ComplexValue::new(sum, if err.is_finite() { err } else { f64::MAX }),
        truncation_bound: truncation,
        cutoff: n,
        order: m,
    }
}

/// Hurwitz zeta ζ(s, a) for 0 < a ≤ 1, continued to every s ≠ 1.
pub fn hurwitz_zeta(s: Complex64, a: f64, cfg: &EvalConfig) -> Result<ComplexValue> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::OutOfRange(format!("hurwitz_zeta requires 0 < a <= 1, got {a}")));
    }
    check_pole(s, cfg)?;

    // Far left of the critical strip the correction order must outgrow -Re(s).
    let needed = (-s.re / 2.0).ceil().max(0.0) as usize + 2;
    let order = cfg.em_order.max(needed).min(MAX_EM_ORDER);
    let mut n = default_cutoff(s);
    let mut best = f64::INFINITY;
    loop {
        let eval = hurwitz_em(s, a, n, order);
        if eval.truncation_bound <= cfg.target_abs_err && eval.value.abs_err.is_finite() && eval.value.abs_err < f64::MAX {
            return Ok(eval.value);
        }
        let worse = !eval.truncation_bound.is_finite() || eval.truncation_bound >= best;
        best = best.min(eval.truncation_bound);
        if n >= cfg.max_terms || worse {
            return Err(Error::BudgetExceeded {
                target: cfg.target_abs_err,
                achieved: best,
                max_terms: cfg.max_terms,
            });
        }
        n = (2 * n).min(cfg.max_terms);
    }
}

/// ζ(s, a) for any a > 0: reduces `a` into (0, 1] and subtracts the prefix.
pub fn hurwitz_zeta_shifted(s: Complex64, a: f64, cfg: &EvalConfig) -> Result<ComplexValue> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::OutOfRange(format!("hurwitz shift must be positive, got {a}")));
    }
    if a <= 1.0 {
        return hurwitz_zeta(s, a, cfg);
    }
    let skip = a.ceil() as usize - 1;
    let reduced = a - skip as f64;
    let base = hurwitz_zeta(s, reduced, cfg)?;
    let mut prefix = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for k in 0..skip {
        let term = pow_neg(k as f64 + reduced, s);
        magnitude += term.norm();
        prefix += term;
    }
    let rounding = f64::EPSILON * magnitude * (4.0 + s.norm() * a.ln().max(1.0));
    Ok(ComplexValue::new(base.value - prefix, base.abs_err + rounding))
}

/// Riemann zeta ζ(s) = ζ(s, 1); left of Re(s) = -1 through the functional equation.
pub fn riemann_zeta(s: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    if s.re < REFLECT_BELOW {
        return reflected_zeta(s, cfg);
    }
    hurwitz_zeta(s, 1.0, cfg)
}

const REFLECT_BELOW: f64 = -1.0;

/// ln sin z, stable for large |Im z|; the branch is irrelevant after exponentiation.
fn ln_sin(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im > 1.0 {
        -i * z + (0.5 * i).ln() + (1.0 - (2.0 * i * z).exp()).ln()
    } else if z.im < -1.0 {
        i * z + (-0.5 * i).ln() + (1.0 - (-2.0 * i * z).exp()).ln()
    } else {
        z.sin().ln()
    }
}

/// ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s).
fn reflected_zeta(s: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    let one = Complex64::new(1.0, 0.0);
    let z = s * (PI / 2.0);
    let lg = log_gamma(one - s, cfg)?;
    let dual = hurwitz_zeta(one - s, 1.0, cfg)?;
    let log_mag = s * 2f64.ln() + (s - one) * PI.ln() + lg.value;
    let log_err = lg.abs_err + 4.0 * f64::EPSILON * (s.norm() * (2f64.ln() + PI.ln()) + lg.value.norm());
    let (factor, sin_err) = if z.im.abs() > 1.0 {
        ((log_mag + ln_sin(z)).exp(), 0.0)
    } else {
        // sin vanishes at the trivial zeros; keep it linear there
        let e = log_mag.exp();
        (e * z.sin(), e.norm() * f64::EPSILON * (1.0 + z.norm()))
    };
    let value = factor * dual.value;
    let abs_err = value.norm() * (log_err + 4.0 * f64::EPSILON)
        + factor.norm() * dual.abs_err
        + sin_err * dual.value.norm();
    if !value.re.is_finite() || !value.im.is_finite() || !abs_err.is_finite() {
        return Err(Error::OutOfRange(format!("zeta({s}) overflows double precision")));
    }
    Ok(ComplexValue::new(value, abs_err))
}

fn check_pole(s: Complex64, cfg: &EvalConfig) -> Result<()> {
    let one = Complex64::new(1.0, 0.0);
    let distance = (s - one).norm();
    if distance < cfg.pole_guard {
        return Err(Error::PoleProximity {
            point: s,
            pole: one,
            distance,
            source_name: "zeta".into(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let v = riemann_zeta(c(2.0, 0.0), &EvalConfig::default()).unwrap();
        assert!((v.value - c(PI * PI / 6.0, 0.0)).norm() < 1e-14);
        assert!(v.abs_err < 1e-12);
    }

    #[test]
    fn zeta_zero_agrees_at_two_settings() {
        let a = hurwitz_em(c(0.0, 0.0), 1.0, 20, 12);
        let b = hurwitz_em(c(0.0, 0.0), 1.0, 57, 16);
        assert!((a.value.value - b.value.value).norm() < 1e-14);
        assert!((a.value.value - c(-0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn negative_integers_give_bernoulli_values() {
        // ζ(-1) = -1/12, ζ(-3) = 1/120
        let cfg = EvalConfig::default();
        let v = riemann_zeta(c(-1.0, 0.0), &cfg).unwrap();
        assert!((v.value - c(-1.0 / 12.0, 0.0)).norm() < 1e-13);
        // the direct sum cancels heavily here; the error estimate must cover it
        let v = riemann_zeta(c(-3.0, 0.0), &cfg).unwrap();
        let miss = (v.value - c(1.0 / 120.0, 0.0)).norm();
        assert!(miss <= v.abs_err && miss < 1e-10, "{miss} vs {}", v.abs_err);
    }

    #[test]
    fn pole_is_guarded() {
        let cfg = EvalConfig::default();
        let err = riemann_zeta(c(1.0 + 1e-9, 0.0), &cfg).unwrap_err();
        assert!(matches!(err, Error::PoleProximity { .. }));
        assert!(riemann_zeta(c(1.0 + 1e-7, 0.0), &cfg).is_ok());
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = EvalConfig { target_abs_err: 1e-300, max_terms: 64, ..Default::default() };
        let err = riemann_zeta(c(0.5, 3.0), &cfg).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn shift_out_of_range_is_rejected() {
        let cfg = EvalConfig::default();
        assert!(hurwitz_zeta(c(2.0, 0.0), 1.5, &cfg).is_err());
        assert!(hurwitz_zeta(c(2.0, 0.0), 0.0, &cfg).is_err());
    }

    #[test]
    fn shifted_entry_subtracts_prefix() {
        // ζ(s, 3) = ζ(s) - 1 - 2^{-s}
        let cfg = EvalConfig::default();
        let s = c(2.5, 1.0);
        let lhs = hurwitz_zeta_shifted(s, 3.0, &cfg).unwrap();
        let z = riemann_zeta(s, &cfg).unwrap();
        let rhs = z.value - c(1.0, 0.0) - pow_neg(2.0, s);
        assert!((lhs.value - rhs).norm() < 1e-13);
    }

    #[test]
    fn first_zero_is_small() {
        let v = riemann_zeta(c(0.5, 14.134725), &EvalConfig::default()).unwrap();
        assert!(v.norm() < 1e-5, "{}", v.norm());
    }

    #[test]
    fn left_half_plane_matches_reference() {
        let cfg = EvalConfig::default();
        let cases = [
            (c(-3.5, 10.0), c(5.840_095_012_654_973, 4.456_240_051_847_265)),
            (c(-1.5, 0.0), c(-0.025_485_201_889_833_036, 0.0)),
            (c(-11.0, -3.0), c(-0.217_740_091_651_760_97, 0.766_912_169_001_169_5)),
            (c(-20.0, 100.0), c(-2.400_289_134_493_953e24, 4.384_804_026_845_598_6e24)),
        ];
        for (s, want) in cases {
            let v = riemann_zeta(s, &cfg).unwrap();
            let miss = (v.value - want).norm();
            assert!(miss <= 1e-12 * want.norm().max(1.0), "{s}: {} vs {want}", v.value);
            assert!(miss <= v.abs_err.max(1e-13 * want.norm()), "{s}: miss {miss} above bound {}", v.abs_err);
        }
    }

    #[test]
    fn far_left_fails_cleanly() {
        let cfg = EvalConfig::default();
        assert!(riemann_zeta(c(-42.0, 1e-7), &cfg).is_ok());
        assert!(matches!(hurwitz_zeta(c(-80.0, 0.5), 0.5, &cfg), Err(Error::BudgetExceeded { .. })));
    }
}
