//! Zeta functions of the space of symmetric matrices for odd n ≥ 3.
//!
//! ζ_{η,θ}(s, L) = b_n(s; L) · (A_n(s; L) ζ(s - (n-1)/2) + B_n(s)).

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::tables::tables;
use crate::numerics::{riemann_zeta, ComplexValue, EvalConfig};

/// Largest n whose Bernoulli product fits the constant tables.
pub const SYMMAT_MAX_N: usize = 59;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lattice {
    /// Integral symmetric matrices.
    Ln,
    /// Half-integral matrices with even diagonal, scaled by 1/2.
    LnStar,
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lattice::Ln => f.write_str("Ln"),
            Lattice::LnStar => f.write_str("Ln*"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymMatrixParams {
    pub n: usize,
    pub lattice: Lattice,
    pub eta: i8,
    pub theta: i8,
}

/// One ζ factor of the closed form, ζ(scale·s - shift).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaFactor {
    pub scale: f64,
    pub shift: f64,
}

impl ZetaFactor {
    pub fn pole(&self) -> f64 {
        (1.0 + self.shift) / self.scale
    }

    pub fn name(&self) -> String {
        let head = if self.scale == 1.0 { "s".to_string() } else { format!("{}*s", self.scale) };
        if self.shift == 0.0 {
            format!("zeta({head})")
        } else {
            format!("zeta({head}-{})", self.shift)
        }
    }
}

impl SymMatrixParams {
    pub fn new(n: usize, lattice: Lattice, eta: i8, theta: i8) -> Result<Self> {
        let p = SymMatrixParams { n, lattice, eta, theta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 || self.n.is_multiple_of(2) || self.n > SYMMAT_MAX_N {
            return Err(Error::OutOfRange(format!(
                "symmetric-matrix zeta needs odd n in 3..={SYMMAT_MAX_N}, got {}",
                self.n
            )));
        }
        if self.eta.abs() != 1 || self.theta.abs() != 1 {
            return Err(Error::InvalidConfig(format!(
                "eta and theta must be +1 or -1, got {} and {}",
                self.eta, self.theta
            )));
        }
        Ok(())
    }

    fn half(&self) -> usize {
        self.n / 2
    }

    /// θ η^{(n+1)/2} (-1)^{(n²-1)/8}.
    pub fn sign_factor(&self) -> i8 {
        let eta_pow = if self.n.div_ceil(2).is_multiple_of(2) { 1 } else { self.eta };
        let last = if ((self.n * self.n - 1) / 8).is_multiple_of(2) { 1 } else { -1 };
        self.theta * eta_pow * last
    }

    /// |Π_{k=1}^{[n/2]} B_{2k}| / (2^{n-1} ((n-1)/2)!), without the L_n* exponential.
    pub fn b_constant(&self) -> BigRational {
        let t = tables();
        let mut prod = BigRational::one();
        for k in 1..=self.half() {
            prod *= t.bernoulli(2 * k).clone();
        }
        let fact: BigInt = (1..=(self.n - 1) / 2).map(BigInt::from).product();
        let denom = (BigInt::one() << (self.n - 1)) * fact;
        prod.abs() / BigRational::from_integer(denom)
    }

    /// The leading shifted factor ζ(s - (n-1)/2).
    pub fn shifted_factor(&self) -> ZetaFactor {
        ZetaFactor { scale: 1.0, shift: (self.n as f64 - 1.0) / 2.0 }
    }

    /// ζ(2s - (2k-1)), k = 1..[n/2].
    pub fn a_factors(&self) -> Vec<ZetaFactor> {
        (1..=self.half()).map(|k| ZetaFactor { scale: 2.0, shift: (2 * k - 1) as f64 }).collect()
    }

    /// ζ(s) followed by ζ(2s - 2k), k = 1..[n/2].
    pub fn b_factors(&self) -> Vec<ZetaFactor> {
        let mut out = vec![ZetaFactor { scale: 1.0, shift: 0.0 }];
        out.extend((1..=self.half()).map(|k| ZetaFactor { scale: 2.0, shift: (2 * k) as f64 }));
        out
    }

    /// Distinct pole candidates, ascending.
    pub fn poles(&self) -> Vec<f64> {
        let mut out: Vec<f64> = std::iter::once(self.shifted_factor())
            .chain(self.a_factors())
            .chain(self.b_factors())
            .map(|f| f.pole())
            .collect();
        out.sort_by(|a, b| a.total_cmp(b));
        out.dedup();
        out
    }
}

impl fmt::Display for SymMatrixParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |v: i8| if v > 0 { "+1" } else { "-1" };
        write!(f, "symmat({},{},{},{})", self.n, self.lattice, sign(self.eta), sign(self.theta))
    }
}

fn factor_value(p: &SymMatrixParams, factor: ZetaFactor, s: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    let pole = Complex64::new(factor.pole(), 0.0);
    let distance = (s - pole).norm();
    if distance < cfg.pole_guard {
        return Err(Error::PoleProximity {
            point: s,
            pole,
            distance,
            source_name: format!("{p} factor {}", factor.name()),
        });
    }
    riemann_zeta(s * factor.scale - factor.shift, cfg)
}

pub fn symmat_zeta(p: &SymMatrixParams, s: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    p.validate()?;
    let mut b = Complex64::new(p.b_constant().to_f64().unwrap_or(f64::NAN), 0.0);
    let mut a_scale = 1.0;
    match p.lattice {
        Lattice::Ln => a_scale = 2f64.powf((p.n as f64 - 1.0) / 2.0),
        Lattice::LnStar => b *= ((p.n as f64 - 1.0) * std::f64::consts::LN_2 * s).exp(),
    }

    let mut a_part = ComplexValue::real(a_scale);
    for factor in p.a_factors() {
        a_part = a_part * factor_value(p, factor, s, cfg)?;
    }
    let shifted = factor_value(p, p.shifted_factor(), s, cfg)?;

    let mut b_part = ComplexValue::real(p.sign_factor() as f64);
    for factor in p.b_factors() {
        b_part = b_part * factor_value(p, factor, s, cfg)?;
    }

    Ok((a_part * shifted + b_part).scale(b))
}
