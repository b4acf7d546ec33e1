//! Barnes r-tuple zeta with unit periods, ζ_r(s, a) = Σ_{n ∈ N^r} (n_1 + … + n_r + a)^{-s}.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::sum::CompensatedSum;
use crate::error::{Error, Result};
use crate::numerics::tables::{tables, STIRLING_MAX};
use crate::numerics::{hurwitz_zeta_shifted, ComplexValue, EvalConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarnesParams {
    pub r: usize,
    pub a: f64,
}

impl BarnesParams {
    pub fn new(r: usize, a: f64) -> Result<Self> {
        let p = Self { r, a };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.r >= STIRLING_MAX {
            return Err(Error::OutOfRange(format!(
                "Barnes depth r must lie in 1..{STIRLING_MAX}, got {}",
                self.r
            )));
        }
        if !(self.a > 0.0) || !self.a.is_finite() {
            return Err(Error::OutOfRange(format!("Barnes shift must be positive, got {}", self.a)));
        }
        Ok(())
    }

    /// Simple poles at s = 1, …, r.
    pub fn poles(&self) -> Vec<f64> {
        (1..=self.r).map(|k| k as f64).collect()
    }
}

/// Exact p_{rj}(a) for rational `a`:
/// p_{rj}(a) = 1/(r-1)! Σ_{l=j}^{r-1} (-1)^{r+1-j} C(l, j) s(r, l+1) a^{l-j}.
pub fn barnes_coeffs_exact(r: usize, a: &BigRational) -> Vec<BigRational> {
    let t = tables();
    let fact: BigInt = (1..r).map(BigInt::from).product();
    (0..r)
        .map(|j| {
            let mut acc = BigRational::zero();
            let mut a_pow = BigRational::from_integer(BigInt::from(1));
            for l in j..r {
                let c = t.binomial(l, j) * t.stirling_first(r, l + 1);
                acc += BigRational::from_integer(c) * &a_pow;
                a_pow *= a;
            }
            let sign = if (r + 1 - j).is_multiple_of(2) { 1 } else { -1 };
            acc * BigRational::from_integer(BigInt::from(sign)) / BigRational::from_integer(fact.clone())
        })
        .collect()
}

/// The same coefficients evaluated in floating point for real `a`.
pub fn barnes_coeffs(r: usize, a: f64) -> Vec<f64> {
    let t = tables();
    let fact: f64 = (1..r).map(|k| k as f64).product();
    (0..r)
        .map(|j| {
            let mut acc = 0.0;
            let mut a_pow = 1.0;
            for l in j..r {
                let c = (t.binomial(l, j) * t.stirling_first(r, l + 1)).to_f64().unwrap_or(f64::NAN);
                acc += c * a_pow;
                a_pow *= a;
            }
            let sign = if (r + 1 - j).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * acc / fact
        })
        .collect()
}

/// ζ_r(s, a) = Σ_j p_{rj}(a) ζ(s - j, a), valid on the continued domain.
pub fn barnes_zeta(p: &BarnesParams, s: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    p.validate()?;
    let coeffs = barnes_coeffs(p.r, p.a);
    let mut total = ComplexValue::real(0.0);
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let pole = Complex64::new(j as f64 + 1.0, 0.0);
        let distance = (s - pole).norm();
        if distance < cfg.pole_guard {
            return Err(Error::PoleProximity {
                point: s,
                pole,
                distance,
                source_name: format!("barnes({}, {}) pole at s = {}", p.r, p.a, j + 1),
            });
        }
        let z = hurwitz_zeta_shifted(s - j as f64, p.a, cfg)?;
        total = total + z.scale(Complex64::new(c, 0.0));
    }
    Ok(total)
}

/// Coefficients of C(x + r - 1, r - 1) = Π_{i=1}^{r-1} (x + i) / (r-1)! in powers of x.
fn lattice_count_poly(r: usize) -> Vec<f64> {
    let mut poly = vec![1.0];
    for i in 1..r {
        let mut next = vec![0.0; poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k] += c * i as f64;
            next[k + 1] += c;
        }
        poly = next;
    }
    let fact: f64 = (1..r).map(|k| k as f64).product();
    poly.iter().map(|c| c / fact).collect()
}

fn poly_derivative(poly: &[f64]) -> Vec<f64> {
    poly.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

fn poly_eval(poly: &[f64], x: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Summand f(x) = C(x + r - 1, r - 1) (x + a)^{-s} and its derivatives.
struct Summand {
    /// derivatives of the count polynomial, index = order
    poly_derivs: Vec<Vec<f64>>,
    a: f64,
    s: Complex64,
}

impl Summand {
    fn new(r: usize, a: f64, s: Complex64, max_order: usize) -> Self {
        let mut poly_derivs = vec![lattice_count_poly(r)];
        for _ in 0..max_order {
            let d = poly_derivative(poly_derivs.last().unwrap());
            poly_derivs.push(d);
        }
        Self { poly_derivs, a, s }
    }

    fn value(&self, x: f64) -> Complex64 {
        poly_eval(&self.poly_derivs[0], x) * power(x + self.a, -self.s)
    }

    /// f^{(n)}(x) by Leibniz: Σ_i C(n, i) P^{(i)}(x) g^{(n-i)}(x), g = (x + a)^{-s}.
    fn derivative(&self, x: f64, n: usize) -> Complex64 {
        let y = x + self.a;
        let mut g_derivs = Vec::with_capacity(n + 1);
        let mut falling = Complex64::new(1.0, 0.0);
        for i in 0..=n {
            g_derivs.push(falling * power(y, -self.s - i as f64));
            falling *= -self.s - i as f64;
        }
        let mut binom = 1.0;
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..=n {
            if i < self.poly_derivs.len() && !self.poly_derivs[i].is_empty() {
                total += binom * poly_eval(&self.poly_derivs[i], x) * g_derivs[n - i];
            }
            binom = binom * (n - i) as f64 / (i + 1) as f64;
        }
        total
    }
}

fn power(base: f64, exponent: Complex64) -> Complex64 {
    let l = base.ln();
    Complex64::from_polar((exponent.re * l).exp(), exponent.im * l)
}

/// 8-point Gauss–Legendre nodes and weights on [-1, 1].
const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// ∫_N^∞ f(x) dx via x = N e^u and composite Gauss–Legendre in u.
fn tail_integral(f: &Summand, start: f64, decay: f64) -> (Complex64, f64) {
    let integrand = |u: f64| {
        let x = start * u.exp();
        f.value(x) * x
    };
    let width = (0.5f64).min(1.0 / f.s.norm().max(1.0));
    let horizon = (25.0 * std::f64::consts::LN_10 / decay).min(2000.0);
    let panels = (horizon / width).ceil() as usize;
    let mut acc = CompensatedSum::default();
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        let half = 0.5 * width;
        for (&x, &w) in GL_NODES.iter().zip(&GL_WEIGHTS) {
            acc.add(w * half * (integrand(mid - half * x) + integrand(mid + half * x)));
        }
    }
    let end = panels as f64 * width;
    // |integrand| decays like e^{-decay u} up to a bounded polynomial factor
    let remainder = 2.0 * integrand(end).norm() / decay;
    (acc.value(), remainder + f64::EPSILON * acc.magnitude() * 8.0)
}

/// Direct lattice sum Σ_k C(k + r - 1, r - 1)(k + a)^{-s}, with the tail past the
/// cutoff taken by Euler–Maclaurin on the smooth summand.
pub fn barnes_direct(p: &BarnesParams, s: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    barnes_direct_with_cutoff(p, s, 2000, cfg)
}

pub fn barnes_direct_with_cutoff(
    p: &BarnesParams,
    s: Complex64,
    cutoff: usize,
    cfg: &EvalConfig,
) -> Result<ComplexValue> {
    p.validate()?;
    let r = p.r;
    if s.re < r as f64 + 0.5 {
        return Err(Error::NotInConvergenceRegion(format!(
            "barnes_direct requires Re(s) >= {}, got {s}",
            r as f64 + 0.5
        )));
    }
    if cutoff > cfg.max_terms {
        return Err(Error::BudgetExceeded {
            target: cfg.target_abs_err,
            achieved: f64::INFINITY,
            max_terms: cfg.max_terms,
        });
    }

    const CORRECTIONS: usize = 4;
    let f = Summand::new(r, p.a, s, 2 * CORRECTIONS + 2);
    let mut acc = CompensatedSum::default();
    for k in 0..cutoff {
        acc.add(f.value(k as f64));
    }

    let x = cutoff as f64;
    let (integral, quad_err) = tail_integral(&f, x, s.re - r as f64);
    let mut tail = integral + 0.5 * f.value(x);
    let t = tables();
    for k in 1..=CORRECTIONS {
        tail -= t.em_coeff(k) * f.derivative(x, 2 * k - 1);
    }
    let next = t.em_coeff(CORRECTIONS + 1) * f.derivative(x, 2 * CORRECTIONS + 1);
    let truncation = 2.0 * next.norm();

    let value = acc.value() + tail;
    let rounding = f64::EPSILON * acc.magnitude() * (4.0 + s.norm() * x.ln());
    Ok(ComplexValue::new(value, truncation + quad_err + rounding))
}
