//! Direct summation of products of linear forms,
//! Σ_n Π_l (λ_{l1}(n_1 + a_1) + … + λ_{lr}(n_r + a_r) + c_l)^{-s_l},
//! inside the region of absolute convergence.
//!
//! The tail bound majorizes every form by a weighted geometric mean of its
//! variables, which factorizes the sum into one-dimensional pieces.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sum::CompensatedSum;
use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, EvalConfig};

/// Extra margin over the r/m abscissa required of every Re(s_l).
pub const CONVERGENCE_MARGIN: f64 = 0.1;

const INITIAL_CUTOFF: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexOffset {
    FromZero,
    FromOne,
}

impl IndexOffset {
    pub fn start(self) -> usize {
        match self {
            IndexOffset::FromZero => 0,
            IndexOffset::FromOne => 1,
        }
    }
}

impl FromStr for IndexOffset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "from_zero" | "0" => Ok(IndexOffset::FromZero),
            "from_one" | "1" => Ok(IndexOffset::FromOne),
            other => Err(Error::InvalidConfig(format!("unknown index offset '{other}'"))),
        }
    }
}

impl fmt::Display for IndexOffset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexOffset::FromZero => "from_zero",
            IndexOffset::FromOne => "from_one",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFormSeries {
    /// Number of summation variables.
    pub r: usize,
    /// Number of linear forms.
    pub m: usize,
    /// m × r coefficients, row-major. Zero entries drop a variable from a form.
    pub lambda: Vec<f64>,
    /// a_1..a_r.
    pub shifts: Vec<f64>,
    /// Constant added to each form; all zero unless a preset needs it.
    #[serde(default)]
    pub form_constants: Vec<f64>,
    pub index_offset: IndexOffset,
    /// Restrict to n_1 > n_2 > … > n_r.
    pub strict_order: bool,
}

impl LinearFormSeries {
    /// Σ_{m,n ≥ 1} n_1^{-s_1} … n_r^{-s_r} (n_1 + … + n_r + a)^{-s_{r+1}}.
    pub fn mordell(r: usize, a: f64) -> Self {
        let mut lambda = vec![0.0; (r + 1) * r];
        for k in 0..r {
            lambda[k * r + k] = 1.0;
            lambda[r * r + k] = 1.0;
        }
        let mut form_constants = vec![0.0; r + 1];
        form_constants[r] = a;
        LinearFormSeries {
            r,
            m: r + 1,
            lambda,
            shifts: vec![0.0; r],
            form_constants,
            index_offset: IndexOffset::FromOne,
            strict_order: false,
        }
    }

    /// Forms n_1, n_2, n_1 + n_2 over positive integers.
    pub fn witten_a2() -> Self {
        LinearFormSeries {
            r: 2,
            m: 3,
            lambda: vec![1.0, 0.0, 0.0, 1.0, 1.0, 1.0],
            shifts: vec![0.0, 0.0],
            form_constants: vec![0.0; 3],
            index_offset: IndexOffset::FromOne,
            strict_order: false,
        }
    }

    /// Σ_{n_1 > … > n_r ≥ 0} Π (n_k + a_k)^{-s_k}.
    pub fn euler_zagier_hurwitz(shifts: &[f64]) -> Self {
        let r = shifts.len();
        let mut lambda = vec![0.0; r * r];
        for k in 0..r {
            lambda[k * r + k] = 1.0;
        }
        LinearFormSeries {
            r,
            m: r,
            lambda,
            shifts: shifts.to_vec(),
            form_constants: vec![0.0; r],
            index_offset: IndexOffset::FromZero,
            strict_order: true,
        }
    }

    pub fn coeff(&self, l: usize, k: usize) -> f64 {
        self.lambda[l * self.r + k]
    }

    fn constant(&self, l: usize) -> f64 {
        self.form_constants.get(l).copied().unwrap_or(0.0)
    }

    fn support(&self, l: usize) -> Vec<usize> {
        (0..self.r).filter(|&k| self.coeff(l, k) != 0.0).collect()
    }

    /// Smallest value n_k + a_k can take.
    fn min_coordinate(&self, k: usize) -> f64 {
        let start = if self.strict_order {
            self.index_offset.start() + (self.r - 1 - k)
        } else {
            self.index_offset.start()
        };
        start as f64 + self.shifts[k]
    }

    /// True when the all-start index vector makes some form vanish and must be skipped.
    fn excludes_origin(&self) -> bool {
        (0..self.m).any(|l| self.form_at(l, &self.start_index()) == 0.0)
    }

    fn start_index(&self) -> Vec<usize> {
        (0..self.r)
            .map(|k| {
                if self.strict_order {
                    self.index_offset.start() + (self.r - 1 - k)
                } else {
                    self.index_offset.start()
                }
            })
            .collect()
    }

    fn form_at(&self, l: usize, n: &[usize]) -> f64 {
        let mut v = self.constant(l);
        for k in 0..self.r {
            v += self.coeff(l, k) * (n[k] as f64 + self.shifts[k]);
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.r == 0 || self.m == 0 {
            return bad("r and m must be positive".into());
        }
        if self.lambda.len() != self.r * self.m {
            return bad(format!("lambda needs {} entries, got {}", self.r * self.m, self.lambda.len()));
        }
        if self.shifts.len() != self.r {
            return bad(format!("shifts needs {} entries, got {}", self.r, self.shifts.len()));
        }
        if !self.form_constants.is_empty() && self.form_constants.len() != self.m {
            return bad(format!("form_constants needs {} entries, got {}", self.m, self.form_constants.len()));
        }
        if self.lambda.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return bad("lambda entries must be finite and non-negative".into());
        }
        if self.shifts.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return bad("shifts must be finite and non-negative".into());
        }
        if self.form_constants.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return bad("form constants must be finite and non-negative".into());
        }
        for k in 0..self.r {
            if (0..self.m).all(|l| self.coeff(l, k) == 0.0) {
                return bad(format!("variable {} appears in no form", k + 1));
            }
        }
        for l in 0..self.m {
            if self.support(l).is_empty() {
                return bad(format!("form {} has no variables", l + 1));
            }
            // a form may vanish only at the (skipped) start vector
            let vanishing_start = self.constant(l) == 0.0
                && self.support(l).iter().all(|&k| self.min_coordinate(k) == 0.0);
            if vanishing_start && self.support(l).len() < self.r {
                return bad(format!("form {} vanishes at admissible indices", l + 1));
            }
        }
        if self.r == 1 && self.excludes_origin() {
            return bad("the only index vector with a zero form is the whole first term".into());
        }
        Ok(())
    }

    /// Parses the flat `key = value` format.
    ///
    /// Keys: r, m, lambda (row-major), shifts, offset (from_zero | from_one),
    /// strict_order (true | false), form_constants (optional). Lists accept commas or spaces.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut r = None;
        let mut m = None;
        let mut lambda = None;
        let mut shifts = None;
        let mut form_constants = Vec::new();
        let mut index_offset = IndexOffset::FromZero;
        let mut strict_order = false;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected key = value", lineno + 1))
            })?;
            let value = value.trim();
            let parse_list = |v: &str| -> Result<Vec<f64>> {
                v.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| parse_real(t, lineno + 1))
                    .collect()
            };
            let parse_count = |v: &str| -> Result<usize> {
                v.parse().map_err(|_| Error::InvalidConfig(format!("line {}: bad integer '{v}'", lineno + 1)))
            };
            match key.trim() {
                "r" => r = Some(parse_count(value)?),
                "m" => m = Some(parse_count(value)?),
                "lambda" => lambda = Some(parse_list(value)?),
                "shifts" => shifts = Some(parse_list(value)?),
                "form_constants" => form_constants = parse_list(value)?,
                "offset" | "index_offset" => index_offset = value.parse()?,
                "strict_order" => {
                    strict_order = match value {
                        "true" | "1" | "yes" => true,
                        "false" | "0" | "no" => false,
                        other => {
                            return Err(Error::InvalidConfig(format!(
                                "line {}: strict_order must be true or false, got '{other}'",
                                lineno + 1
                            )))
                        }
                    }
                }
                other => {
                    return Err(Error::InvalidConfig(format!("line {}: unknown key '{other}'", lineno + 1)))
                }
            }
        }

        let missing = |k: &str| Error::InvalidConfig(format!("missing key '{k}'"));
        let spec = LinearFormSeries {
            r: r.ok_or_else(|| missing("r"))?,
            m: m.ok_or_else(|| missing("m"))?,
            lambda: lambda.ok_or_else(|| missing("lambda"))?,
            shifts: shifts.ok_or_else(|| missing("shifts"))?,
            form_constants,
            index_offset,
            strict_order,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_real(token: &str, lineno: usize) -> Result<f64> {
    let bad = || Error::InvalidConfig(format!("line {lineno}: bad number '{token}'"));
    if let Some((p, q)) = token.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| bad())?;
        let q: f64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0.0 {
            return Err(bad());
        }
        return Ok(p / q);
    }
    token.parse().map_err(|_| bad())
}

/// Factorized majorant Π_l (form_l)^{-σ_l} ≤ C Π_k (n_k + a_k + b_k)^{-e_k}.
struct Majorant {
    constant: f64,
    base_shift: Vec<f64>,
    exponents: Vec<f64>,
}

impl Majorant {
    fn build(spec: &LinearFormSeries, sigma: &[f64]) -> Result<Self> {
        let r = spec.r;
        // variables whose smallest coordinate is zero get shifted by one
        let base_shift: Vec<f64> =
            (0..r).map(|k| if spec.min_coordinate(k) > 0.0 { 0.0 } else { 1.0 }).collect();
        let mut constant = 1.0;
        let mut exponents = vec![0.0; r];
        for l in 0..spec.m {
            let support = spec.support(l);
            let mu = support.iter().map(|&k| spec.coeff(l, k)).fold(f64::INFINITY, f64::min);
            let added: f64 = support.iter().map(|&k| base_shift[k]).sum();
            // smallest nonzero value of Σ_{k ∈ S} x_k; integers when every coordinate starts at zero
            let floor: f64 = support.iter().map(|&k| spec.min_coordinate(k)).sum::<f64>().max(1.0);
            let kappa = if added > 0.0 { floor / (floor + added) } else { 1.0 };
            constant *= (mu * kappa).powf(-sigma[l]);
            let weight = sigma[l] / support.len() as f64;
            for &k in &support {
                exponents[k] += weight;
            }
        }
        if let Some(k) = (0..r).find(|&k| exponents[k] <= 1.0) {
            return Err(Error::NotInConvergenceRegion(format!(
                "no summable majorant for variable {} (exponent {:.3})",
                k + 1,
                exponents[k]
            )));
        }
        Ok(Majorant { constant, base_shift, exponents })
    }

    /// Σ_{n ≥ n0} (n + a_k + b_k)^{-e_k}.
    fn one_dim(&self, spec: &LinearFormSeries, k: usize, n0: usize) -> f64 {
        let z = n0 as f64 + spec.shifts[k] + self.base_shift[k];
        let e = self.exponents[k];
        z.powf(-e) + z.powf(1.0 - e) / (e - 1.0)
    }

    fn tail(&self, spec: &LinearFormSeries, cutoff: usize) -> f64 {
        let start = spec.index_offset.start();
        let full: Vec<f64> = (0..spec.r).map(|k| self.one_dim(spec, k, start)).collect();
        // with strict order n_1 is the largest index
        let leading = if spec.strict_order { 1 } else { spec.r };
        let mut total = 0.0;
        for j in 0..leading {
            let mut t = self.one_dim(spec, j, cutoff + 1);
            for (k, f) in full.iter().enumerate() {
                if k != j {
                    t *= f;
                }
            }
            total += t;
        }
        self.constant * total
    }
}

fn tuple_count(spec: &LinearFormSeries, cutoff: usize) -> f64 {
    let width = (cutoff + 1 - spec.index_offset.start()) as f64;
    if spec.strict_order {
        (0..spec.r).fold(1.0, |acc, i| acc * (width - i as f64).max(0.0) / (i + 1) as f64)
    } else {
        width.powi(spec.r as i32)
    }
}

struct Walker<'a> {
    spec: &'a LinearFormSeries,
    s: &'a [Complex64],
    cutoff: usize,
    skip_origin: bool,
    origin: Vec<usize>,
    index: Vec<usize>,
    acc: CompensatedSum,
}

impl Walker<'_> {
    fn visit(&mut self, depth: usize) {
        let r = self.spec.r;
        if depth == r {
            if self.skip_origin && self.index == self.origin {
                return;
            }
            let mut log_sum = Complex64::new(0.0, 0.0);
            for l in 0..self.spec.m {
                log_sum += self.s[l] * self.spec.form_at(l, &self.index).ln();
            }
            self.acc.add((-log_sum).exp());
            return;
        }
        let start = self.spec.index_offset.start();
        let (lo, hi) = if self.spec.strict_order {
            let hi = if depth == 0 { self.cutoff } else { self.index[depth - 1] - 1 };
            (start + (r - 1 - depth), hi)
        } else {
            (start, self.cutoff)
        };
        if lo > hi {
            return;
        }
        for n in lo..=hi {
            self.index[depth] = n;
            self.visit(depth + 1);
        }
    }
}

pub fn linear_form_eval(spec: &LinearFormSeries, s: &[Complex64], cfg: &EvalConfig) -> Result<ComplexValue> {
    spec.validate()?;
    if s.len() != spec.m {
        return Err(Error::InvalidConfig(format!("expected {} arguments, got {}", spec.m, s.len())));
    }
    let abscissa = spec.r as f64 / spec.m as f64 + CONVERGENCE_MARGIN;
    if let Some(bad) = s.iter().find(|z| z.re < abscissa) {
        return Err(Error::NotInConvergenceRegion(format!(
            "every Re(s_l) must be at least {abscissa:.3}, got {bad}"
        )));
    }
    let sigma: Vec<f64> = s.iter().map(|z| z.re).collect();
    let majorant = Majorant::build(spec, &sigma)?;

    let mut cutoff = INITIAL_CUTOFF.max(spec.index_offset.start() + spec.r);
    loop {
        if majorant.tail(spec, cutoff) <= cfg.target_abs_err {
            break;
        }
        if tuple_count(spec, cutoff * 2) > cfg.max_terms as f64 {
            return Err(Error::BudgetExceeded {
                target: cfg.target_abs_err,
                achieved: majorant.tail(spec, cutoff),
                max_terms: cfg.max_terms,
            });
        }
        cutoff *= 2;
    }
    // shrink back towards the smallest cutoff meeting the target
    let (mut lo, mut hi) = (cutoff / 2, cutoff);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if majorant.tail(spec, mid) <= cfg.target_abs_err {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let cutoff = if majorant.tail(spec, lo) <= cfg.target_abs_err { lo } else { hi };

    let mut walker = Walker {
        spec,
        s,
        cutoff,
        skip_origin: spec.excludes_origin(),
        origin: spec.start_index(),
        index: vec![0; spec.r],
        acc: CompensatedSum::default(),
    };
    walker.visit(0);
    let scale = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let rounding = f64::EPSILON
        * walker.acc.magnitude()
        * (4.0 + spec.m as f64 * scale * (cutoff as f64 + 1.0).ln());
    Ok(ComplexValue::new(walker.acc.value(), majorant.tail(spec, cutoff) + rounding))
}
