//! Nested summation of ζ_r(s_1, …, s_r) = Σ_{n_1 > … > n_r > 0} Π n_j^{-s_j}.
//!
//! Indices up to a cutoff N are summed exactly. The part with n_1 > … > n_j > N ≥ n_{j+1}
//! factors into a truncated suffix sum times a multiple Hurwitz tail, and the tail is
//! expanded in powers of 1/(N+1). Only valid strictly inside the region of absolute
//! convergence; used as an oracle for the partition identity and the harmonic product.

use num_complex::Complex64;

use super::sum::CompensatedSum;
use crate::error::{Error, Result};
use crate::numerics::tables::tables;
use crate::numerics::{ComplexValue, EvalConfig};

/// Real parts below this are rejected.
pub const EZ_DIRECT_MIN_RE: f64 = 1.1;

const TAIL_TERMS: usize = 30;
const MIN_CUTOFF: usize = 128;

/// Truncated suffix sums Σ_{N ≥ n_j > … > n_r ≥ 1} Π n_i^{-s_i}, one per j.
fn suffix_sums(s: &[Complex64], cutoff: usize) -> Vec<CompensatedSum> {
    let r = s.len();
    let mut sums = vec![CompensatedSum::default(); r];
    let mut pows = vec![Complex64::new(0.0, 0.0); r];
    for k in 1..=cutoff {
        let l = (k as f64).ln();
        for (p, sj) in pows.iter_mut().zip(s) {
            *p = Complex64::from_polar((-sj.re * l).exp(), -sj.im * l);
        }
        // outermost first so that each level reads the previous index of the next one
        for j in 0..r {
            let inner = if j + 1 < r { sums[j + 1].value() } else { Complex64::new(1.0, 0.0) };
            sums[j].add(pows[j] * inner);
        }
    }
    sums
}

/// Σ_p c_p x^{-e-p}, an asymptotic expansion for large x.
#[derive(Debug, Clone)]
struct PowerSeries {
    e: Complex64,
    c: Vec<Complex64>,
}

impl PowerSeries {
    /// ζ(σ, x) ~ x^{1-σ}/(σ-1) + x^{-σ}/2 + Σ_k B_{2k}/(2k)! (σ)_{2k-1} x^{1-σ-2k}.
    fn hurwitz(sigma: Complex64, terms: usize) -> Self {
        let t = tables();
        let mut c = vec![Complex64::new(0.0, 0.0); terms];
        c[0] = 1.0 / (sigma - 1.0);
        if terms > 1 {
            c[1] = Complex64::new(0.5, 0.0);
        }
        let mut rising = sigma;
        for k in 1.. {
            if 2 * k >= terms {
                break;
            }
            c[2 * k] = rising * t.em_coeff(k);
            rising *= (sigma + (2 * k - 1) as f64) * (sigma + (2 * k) as f64);
        }
        PowerSeries { e: sigma - 1.0, c }
    }

    /// F(x + 1) re-expanded in x.
    fn shifted_by_one(&self) -> Self {
        let n = self.c.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (p, cp) in self.c.iter().enumerate() {
            let w = -(self.e + p as f64);
            let mut binom = Complex64::new(1.0, 0.0);
            for q in 0..n - p {
                out[p + q] += cp * binom;
                binom *= (w - q as f64) / (q + 1) as f64;
            }
        }
        PowerSeries { e: self.e, c: out }
    }

    /// G(x) = Σ_{n ≥ 0} (n + x)^{-σ} F(n + x).
    fn summed(&self, sigma: Complex64) -> Self {
        let n = self.c.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (p, cp) in self.c.iter().enumerate() {
            let h = PowerSeries::hurwitz(sigma + self.e + p as f64, n - p);
            for (q, hq) in h.c.iter().enumerate() {
                out[p + q] += cp * hq;
            }
        }
        PowerSeries { e: sigma + self.e - 1.0, c: out }
    }

    /// Value at x with the size of the last two terms as an error estimate.
    fn eval(&self, x: f64) -> (Complex64, f64) {
        let lx = x.ln();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut last = [0.0f64; 2];
        for (p, cp) in self.c.iter().enumerate() {
            let term = cp * (-(self.e + p as f64) * lx).exp();
            acc += term;
            last = [last[1], term.norm()];
        }
        (acc, 2.0 * (last[0] + last[1]))
    }
}

fn estimate(s: &[Complex64], cutoff: usize) -> (Complex64, f64, f64) {
    let r = s.len();
    let sums = suffix_sums(s, cutoff);
    let x = cutoff as f64 + 1.0;

    let mut acc = CompensatedSum::default();
    acc.add(sums[0].value());
    let mut tail_err = 0.0;
    let mut series = PowerSeries::hurwitz(s[0], TAIL_TERMS);
    for j in 1..=r {
        if j > 1 {
            series = series.shifted_by_one().summed(s[j - 1]);
        }
        let (tail, err) = series.eval(x);
        let suffix = if j < r { sums[j].value() } else { Complex64::new(1.0, 0.0) };
        acc.add(tail * suffix);
        tail_err += err * suffix.norm();
    }
    let magnitude = sums.iter().map(|s| s.magnitude()).fold(0.0, f64::max);
    (acc.value(), tail_err, magnitude)
}

pub fn ez_direct(s: &[Complex64], cfg: &EvalConfig) -> Result<ComplexValue> {
    if s.is_empty() {
        return Err(Error::OutOfRange("ez_direct needs at least one argument".into()));
    }
    if let Some(bad) = s.iter().find(|z| z.re < EZ_DIRECT_MIN_RE) {
        return Err(Error::NotInConvergenceRegion(format!(
            "ez_direct requires Re(s_j) >= {EZ_DIRECT_MIN_RE}, got {bad}"
        )));
    }

    let total: Complex64 = s.iter().sum();
    let mut cutoff = MIN_CUTOFF.max((total.norm() + 2.0 * TAIL_TERMS as f64).ceil() as usize);
    if cutoff > cfg.max_terms {
        return Err(Error::BudgetExceeded { target: cfg.target_abs_err, achieved: f64::INFINITY, max_terms: cfg.max_terms });
    }
    loop {
        let (value, tail_err, magnitude) = estimate(s, cutoff);
        let scale = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let rounding = f64::EPSILON * magnitude * (4.0 + s.len() as f64 * scale * (cutoff as f64).ln());
        let err = tail_err + rounding;
        if err <= cfg.target_abs_err || rounding > cfg.target_abs_err {
            return Ok(ComplexValue::new(value, err));
        }
        if cutoff * 2 > cfg.max_terms {
            return Err(Error::BudgetExceeded { target: cfg.target_abs_err, achieved: err, max_terms: cfg.max_terms });
        }
        cutoff *= 2;
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::numerics::riemann_zeta;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn depth_one_is_zeta() {
        let cfg = EvalConfig::default().with_target(1e-11);
        let v = ez_direct(&[c(3.0, 0.0)], &cfg).unwrap();
        let z = riemann_zeta(c(3.0, 0.0), &cfg).unwrap();
        assert!((v.value - z.value).norm() <= v.abs_err + z.abs_err);
        assert!((v.value - z.value).norm() < 1e-11);
    }

    #[test]
    fn two_two_is_pi_four_over_120() {
        let cfg = EvalConfig::default().with_target(1e-10);
        let v = ez_direct(&[c(2.0, 0.0), c(2.0, 0.0)], &cfg).unwrap();
        assert!((v.re() - PI.powi(4) / 120.0).abs() < 1e-13);
        assert!(v.abs_err <= 1e-10);
    }

    #[test]
    fn harmonic_product_at_four_two() {
        let cfg = EvalConfig::default().with_target(1e-11);
        let (a, b) = (c(4.0, 0.0), c(2.0, 0.0));
        let lhs = riemann_zeta(a, &cfg).unwrap().value * riemann_zeta(b, &cfg).unwrap().value;
        let rhs = ez_direct(&[a, b], &cfg).unwrap().value
            + ez_direct(&[b, a], &cfg).unwrap().value
            + riemann_zeta(a + b, &cfg).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn tail_expansion_matches_plain_sum() {
        // at Re = 6 the plain truncated sum is already exact to double precision
        let s = [c(6.0, 1.0), c(6.5, -2.0), c(7.0, 0.5)];
        let plain = suffix_sums(&s, 4000)[0].value();
        let v = ez_direct(&s, &EvalConfig::default()).unwrap();
        assert!((v.value - plain).norm() < 1e-16);
    }

    #[test]
    fn slow_inner_exponent() {
        let cfg = EvalConfig::default().with_target(1e-12);
        let v = ez_direct(&[c(3.0, 0.0), c(1.1, 0.0)], &cfg).unwrap();
        let plain = suffix_sums(&[c(3.0, 0.0), c(1.1, 0.0)], 200_000)[0].value();
        // the plain sum misses roughly Σ_{n > 2e5} n^{-3} ζ(1.1) ≈ 1.3e-10
        assert!((v.value - plain).norm() < 2e-10);
        assert!(v.value.re > plain.re);
    }

    #[test]
    fn matches_diagonal_reduction() {
        let cfg = EvalConfig::default();
        for s in [c(2.5, 0.0), c(3.0, 2.0)] {
            for r in 2..=5 {
                let d = crate::families::ez_diagonal(r, s, &cfg).unwrap();
                let v = ez_direct(&vec![s; r], &cfg).unwrap();
                assert!((d.value - v.value).norm() <= 1e-9 * d.norm(), "r = {r}, s = {s}");
            }
        }
    }

    #[test]
    fn rejects_boundary_region() {
        let cfg = EvalConfig::default();
        assert!(matches!(
            ez_direct(&[c(3.0, 0.0), c(1.0, 0.0)], &cfg),
            Err(Error::NotInConvergenceRegion(_))
        ));
    }

    #[test]
    fn budget_exceeded_when_cutoff_capped() {
        let cfg = EvalConfig { max_terms: 100, ..Default::default() };
        assert!(matches!(
            ez_direct(&[c(1.2, 0.0), c(2.0, 0.0)], &cfg),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
