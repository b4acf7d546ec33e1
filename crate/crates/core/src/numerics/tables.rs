//! Exact integer and rational constant tables.
//!
//! Built once on first use and shared immutably afterwards.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Highest Bernoulli index stored (even).
pub const BERNOULLI_MAX: usize = 60;
/// Largest `r` for Stirling numbers of the first kind.
pub const STIRLING_MAX: usize = 24;
/// Largest `n` for binomial coefficients.
pub const BINOMIAL_MAX: usize = 64;

#[derive(Debug)]
pub struct ConstantTables {
    /// B_0..=B_BERNOULLI_MAX with B_1 = -1/2.
    bernoulli: Vec<BigRational>,
    /// Signed s(r, l) for 0 <= l <= r <= STIRLING_MAX, row-major.
    stirling_first: Vec<Vec<BigInt>>,
    binomial: Vec<Vec<BigInt>>,
    /// B_{2k} / (2k)! as f64, indexed by k.
    em_coeffs: Vec<f64>,
}

static TABLES: OnceLock<ConstantTables> = OnceLock::new();

pub fn tables() -> &'static ConstantTables {
    TABLES.get_or_init(ConstantTables::build)
}

impl ConstantTables {
    fn build() -> Self {
        let binomial = build_binomial(BINOMIAL_MAX.max(BERNOULLI_MAX + 1));
        let bernoulli = build_bernoulli(BERNOULLI_MAX, &binomial);
        let stirling_first = build_stirling_first(STIRLING_MAX);

        let mut factorial = BigInt::one();
        let mut em_coeffs = vec![1.0];
        for k in 1..=BERNOULLI_MAX / 2 {
            factorial *= BigInt::from(2 * k - 1) * BigInt::from(2 * k);
            let c = &bernoulli[2 * k] / BigRational::from_integer(factorial.clone());
            em_coeffs.push(c.to_f64().unwrap_or(0.0));
        }

        Self { bernoulli, stirling_first, binomial, em_coeffs }
    }

    pub fn bernoulli(&self, n: usize) -> &BigRational {
        &self.bernoulli[n]
    }

    pub fn bernoulli_f64(&self, n: usize) -> f64 {
        self.bernoulli[n].to_f64().unwrap_or(f64::NAN)
    }

    /// Signed Stirling number of the first kind s(r, l).
    pub fn stirling_first(&self, r: usize, l: usize) -> BigInt {
        if l > r {
            BigInt::zero()
        } else {
            self.stirling_first[r][l].clone()
        }
    }

    pub fn binomial(&self, n: usize, k: usize) -> BigInt {
        if k > n {
            BigInt::zero()
        } else {
            self.binomial[n][k].clone()
        }
    }

    /// B_{2k} / (2k)!, the Euler–Maclaurin coefficient of order k.
    pub fn em_coeff(&self, k: usize) -> f64 {
        self.em_coeffs[k]
    }

    pub fn bernoulli_len(&self) -> usize {
        self.bernoulli.len()
    }

    pub fn stirling_rows(&self) -> usize {
        self.stirling_first.len()
    }
}

fn build_binomial(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut row = vec![BigInt::one(); n + 1];
        for k in 1..n {
            row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

// B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
fn build_bernoulli(n_max: usize, binomial: &[Vec<BigInt>]) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n_max + 1);
    b.push(BigRational::one());
    for m in 1..=n_max {
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binomial[m + 1][j].clone()) * bj;
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

// s(r+1, l) = s(r, l-1) - r s(r, l)
fn build_stirling_first(r_max: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vec![vec![BigInt::one()]];
    for r in 0..r_max {
        let prev = &rows[r];
        let mut row = vec![BigInt::zero(); r + 2];
        for (l, slot) in row.iter_mut().enumerate() {
            let left = if l >= 1 && l - 1 <= r { prev[l - 1].clone() } else { BigInt::zero() };
            let here = if l <= r { prev[l].clone() } else { BigInt::zero() };
            *slot = left - BigInt::from(r) * here;
        }
        rows.push(row);
    }
    rows
}
