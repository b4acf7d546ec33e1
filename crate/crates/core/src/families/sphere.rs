//! Spectral zeta of the Laplacian on S^n with eigenvalues shifted to (k + (n-1)/2)^2.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::sum::CompensatedSum;
use crate::error::{Error, Result};
use crate::numerics::tables::tables;
use crate::numerics::{hurwitz_zeta_shifted, pow_neg, riemann_zeta, ComplexValue, EvalConfig};

pub const SPHERE_MAX_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereParams {
    pub n: usize,
    /// c_0..c_{n-1} with multiplicity(k) = Σ_j c_j m^j, m = k + (n-1)/2.
    #[serde(skip)]
    pub mult_poly: Vec<BigRational>,
}

impl SphereParams {
    pub fn coefficients_f64(&self) -> Vec<f64> {
        self.mult_poly.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Shift of the Hurwitz atoms, (n + 1) / 2.
    pub fn hurwitz_shift(&self) -> f64 {
        (self.n as f64 + 1.0) / 2.0
    }

    /// Exponents j with c_j ≠ 0; each contributes a pole at s = (1 + j) / 2.
    pub fn active_exponents(&self) -> Vec<usize> {
        (0..self.mult_poly.len()).filter(|&j| !self.mult_poly[j].is_zero()).collect()
    }

    pub fn poles(&self) -> Vec<f64> {
        self.active_exponents().into_iter().map(|j| (1.0 + j as f64) / 2.0).collect()
    }

    /// Checks Σ_j c_j (k + (n-1)/2)^j = C(k+n, n) - C(k+n-2, n) for k = 1..=2n.
    pub fn check_multiplicities(&self) -> bool {
        (1..=2 * self.n).all(|k| {
            let m = BigRational::from_integer(BigInt::from(k))
                + BigRational::new(BigInt::from(self.n as i64 - 1), BigInt::from(2));
            let mut value = BigRational::zero();
            let mut pow = BigRational::one();
            for c in &self.mult_poly {
                value += c * &pow;
                pow *= &m;
            }
            value == BigRational::from_integer(multiplicity(self.n, k))
        })
    }
}

/// C(k+n, n) - C(k+n-2, n).
pub fn multiplicity(n: usize, k: usize) -> BigInt {
    let t = tables();
    let lower = if k + n >= 2 { t.binomial(k + n - 2, n) } else { BigInt::zero() };
    t.binomial(k + n, n) - lower
}

fn poly_mul_linear(poly: &[BigRational], root_shift: &BigRational) -> Vec<BigRational> {
    // poly(m) * (m + root_shift)
    let mut out = vec![BigRational::zero(); poly.len() + 1];
    for (k, c) in poly.iter().enumerate() {
        out[k] += c * root_shift;
        out[k + 1] += c;
    }
    out
}

/// Multiplicity polynomial re-centred at m = k + (n-1)/2.
///
/// For n ≥ 2, multiplicity(k) = (2k + n - 1) Π_{i=1}^{n-2} (k + i) / (n-1)!, and
/// 2k + n - 1 = 2m.
pub fn sphere_mult_poly(n: usize) -> Result<SphereParams> {
    if n == 0 || n > SPHERE_MAX_N {
        return Err(Error::OutOfRange(format!("sphere dimension must lie in 1..={SPHERE_MAX_N}, got {n}")));
    }
    if n == 1 {
        return Ok(SphereParams { n, mult_poly: vec![BigRational::from_integer(BigInt::from(2))] });
    }
    let centre = BigRational::new(BigInt::from(n as i64 - 1), BigInt::from(2));
    let mut poly = vec![BigRational::zero(), BigRational::from_integer(BigInt::from(2))];
    for i in 1..=n - 2 {
        let shift = BigRational::from_integer(BigInt::from(i)) - &centre;
        poly = poly_mul_linear(&poly, &shift);
    }
    let fact: BigInt = (1..n).map(BigInt::from).product();
    let fact = BigRational::from_integer(fact);
    let mult_poly = poly.into_iter().map(|c| c / &fact).collect();
    Ok(SphereParams { n, mult_poly })
}

/// Z_{S^n}(s) = Σ_j c_j ζ(2s - j, (n+1)/2).
pub fn sphere_spectral(n: usize, s: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    let params = sphere_mult_poly(n)?;
    let coeffs = params.coefficients_f64();
    let shift = params.hurwitz_shift();
    let mut total = ComplexValue::real(0.0);
    for j in params.active_exponents() {
        let pole = Complex64::new((1.0 + j as f64) / 2.0, 0.0);
        let distance = (s - pole).norm();
        if distance < cfg.pole_guard {
            return Err(Error::PoleProximity {
                point: s,
                pole,
                distance,
                source_name: format!("sphere({n}) atom zeta(2s-{j})"),
            });
        }
        let z = hurwitz_zeta_shifted(2.0 * s - j as f64, shift, cfg)?;
        total = total + z.scale(Complex64::new(coeffs[j], 0.0));
    }
    Ok(total)
}

/// Direct eigenvalue sum Σ_k mult(k) (k + (n-1)/2)^{-2s} with an integral tail bound.
pub fn sphere_direct(n: usize, s: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    let params = sphere_mult_poly(n)?;
    let sigma = 2.0 * s.re;
    // the summand is O(m^{n-1-2σ})
    let excess = sigma - n as f64;
    if excess <= 0.05 {
        return Err(Error::NotInConvergenceRegion(format!(
            "sphere_direct needs Re(s) > n/2, got {s} for n = {n}"
        )));
    }
    let coeffs = params.coefficients_f64();
    let centre = (n as f64 - 1.0) / 2.0;
    let tail = |k: usize| -> f64 {
        let m = k as f64 + centre;
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(j, c)| c.abs() * m.powf(j as f64 + 1.0 - sigma) / (sigma - j as f64 - 1.0))
            .sum()
    };
    let mut cutoff = 1024usize;
    while tail(cutoff) > cfg.target_abs_err {
        if cutoff >= cfg.max_terms {
            return Err(Error::BudgetExceeded {
                target: cfg.target_abs_err,
                achieved: tail(cutoff),
                max_terms: cfg.max_terms,
            });
        }
        cutoff = (cutoff * 2).min(cfg.max_terms);
    }

    let mut acc = CompensatedSum::default();
    for k in 1..=cutoff {
        let m = k as f64 + centre;
        let mult: f64 = coeffs.iter().rev().fold(0.0, |a, c| a * m + c);
        acc.add(mult * pow_neg(m, 2.0 * s));
    }
    let rounding = f64::EPSILON * acc.magnitude() * (4.0 + 2.0 * s.norm() * (cutoff as f64).ln());
    Ok(ComplexValue::new(acc.value(), tail(cutoff) + rounding))
}

/// Closed forms for n = 1..4 in terms of ζ, as tabulated for the low-dimensional spheres.
pub fn sphere_closed_form(n: usize, s: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    let one = Complex64::new(1.0, 0.0);
    let exp2 = |w: Complex64| (w * std::f64::consts::LN_2).exp();
    match n {
        1 => Ok(riemann_zeta(2.0 * s, cfg)?.scale(Complex64::new(2.0, 0.0))),
        2 => {
            let z = riemann_zeta(2.0 * s - 1.0, cfg)?;
            let four_s = exp2(2.0 * s);
            Ok(z.scale(four_s - 2.0) - ComplexValue::exact(four_s))
        }
        3 => Ok(riemann_zeta(2.0 * s - 2.0, cfg)? - ComplexValue::exact(one)),
        4 => {
            let z3 = riemann_zeta(2.0 * s - 3.0, cfg)?;
            let z1 = riemann_zeta(2.0 * s - 1.0, cfg)?;
            let p = exp2(2.0 * s - 3.0);
            let two_thirds = |w: Complex64| (w * (2.0f64 / 3.0).ln()).exp();
            let rest = -two_thirds(2.0 * s - 3.0) / 3.0 + two_thirds(2.0 * s) / 8.0;
            Ok(z3.scale((p - 1.0) / 3.0) - z1.scale((p - 0.25) / 3.0) + ComplexValue::exact(rest))
        }
        _ => Err(Error::OutOfRange(format!("closed form tabulated only for n = 1..4, got {n}"))),
    }
}
