//! Euler–Zagier diagonal values through the set-partition identity.
//!
//! ζ_r(s, …, s) = (1/r!) Σ_Π c(Π) Π_j ζ(|ϖ_j| s) with c(Π) = (-1)^{r-l} Π_j (|ϖ_j| - 1)!.
//! Set partitions are grouped by block-size shape, so each shape contributes
//! (-1)^{r-l} / (Π sizes · Π mult!) after dividing by r!.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::numerics::{riemann_zeta, ComplexValue, EvalConfig};

pub const HOFFMAN_MAX_R: usize = 12;

/// One block-size shape and its exact weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTerm {
    /// Block sizes in non-increasing order.
    pub block_sizes: Vec<usize>,
    pub coefficient: BigRational,
}

impl PartitionTerm {
    pub fn coefficient_f64(&self) -> f64 {
        self.coefficient.to_f64().unwrap_or(f64::NAN)
    }
}

/// Integer partitions of `r`, most blocks first.
pub fn integer_partitions(r: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, r, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out
}

pub fn hoffman_diagonal_coeffs(r: usize) -> Result<Vec<PartitionTerm>> {
    if r == 0 || r > HOFFMAN_MAX_R {
        return Err(Error::OutOfRange(format!(
            "diagonal depth r must lie in 1..={HOFFMAN_MAX_R}, got {r}"
        )));
    }
    let terms = integer_partitions(r)
        .into_iter()
        .map(|sizes| {
            let blocks = sizes.len();
            let mut multiplicity: BTreeMap<usize, usize> = BTreeMap::new();
            for &size in &sizes {
                *multiplicity.entry(size).or_default() += 1;
            }
            let mut denom = BigInt::one();
            for &size in &sizes {
                denom *= BigInt::from(size);
            }
            for &count in multiplicity.values() {
                denom *= factorial(count);
            }
            let sign = if (r - blocks).is_multiple_of(2) { 1 } else { -1 };
            PartitionTerm {
                block_sizes: sizes,
                coefficient: BigRational::new(BigInt::from(sign), denom),
            }
        })
        .collect();
    Ok(terms)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// ζ_r(s, …, s) evaluated through ζ(ks) atoms.
pub fn ez_diagonal(r: usize, s: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    let terms = hoffman_diagonal_coeffs(r)?;

    let mut atoms = Vec::with_capacity(r);
    for k in 1..=r {
        let arg = s * k as f64;
        let value = riemann_zeta(arg, cfg).map_err(|e| match e {
            Error::PoleProximity { pole, distance, .. } => Error::PoleProximity {
                point: s,
                pole: pole / k as f64,
                distance: distance / k as f64,
                source_name: format!("zeta({k}*s)"),
            },
            other => other,
        })?;
        atoms.push(value);
    }

    let mut total = ComplexValue::real(0.0);
    for term in &terms {
        let product = term
            .block_sizes
            .iter()
            .fold(ComplexValue::real(1.0), |acc, &size| acc * atoms[size - 1]);
        total = total + product.scale(Complex64::new(term.coefficient_f64(), 0.0));
    }
    Ok(total)
}
