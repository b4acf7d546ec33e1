//! Expressions over zeta atoms and general Dirichlet polynomials.
//!
//! ```
//! use zetazero::expr::{eval_expr, parse_expr};
//! use zetazero::{Complex64, EvalConfig};
//!
//! let e = parse_expr("2*zeta(2*s)").unwrap();
//! let v = eval_expr(&e, Complex64::new(1.0, 0.0), &EvalConfig::default()).unwrap();
//! assert!((v.re() - std::f64::consts::PI.powi(2) / 3.0).abs() < 1e-12);
//! ```

mod parser;
mod print;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::families::{
    barnes_zeta, ez_diagonal, sphere_mult_poly, sphere_spectral, symmat_zeta, BarnesParams, SymMatrixParams,
};
use crate::numerics::{completed_zeta, hurwitz_zeta, hurwitz_zeta_shifted, riemann_zeta, ComplexValue, EvalConfig};

pub use parser::parse_expr;

/// α·s + β with rational coefficients, α ≠ 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Affine {
    pub alpha: Rational64,
    pub beta: Rational64,
}

impl Affine {
    pub fn identity() -> Self {
        Affine { alpha: Rational64::from_integer(1), beta: Rational64::zero() }
    }

    pub fn new(alpha: Rational64, beta: Rational64) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::InvalidConfig("affine argument must depend on s".into()));
        }
        Ok(Affine { alpha, beta })
    }

    pub fn apply(&self, s: Complex64) -> Complex64 {
        s * ratio_f64(self.alpha) + ratio_f64(self.beta)
    }

    /// The s at which the argument equals `w`.
    pub fn preimage(&self, w: f64) -> f64 {
        (w - ratio_f64(self.beta)) / ratio_f64(self.alpha)
    }
}

pub(crate) fn ratio_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZetaKind {
    Riemann,
    /// Hurwitz ζ(·, a) with rational a > 0.
    Hurwitz(Rational64),
    /// π^{-w/2} Γ(w/2) ζ(w).
    Completed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    EzDiagonal(usize),
    Barnes { r: usize, a: Rational64 },
    Sphere(usize),
    SymMat(SymMatrixParams),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ZetaExpr {
    Const(Complex64),
    /// Σ a_k e^{-λ_k s}.
    DirichletPoly(Vec<(Complex64, f64)>),
    ZetaAtom { arg: Affine, kind: ZetaKind },
    Family(FamilyKind),
    Add(Vec<ZetaExpr>),
    Mul(Vec<ZetaExpr>),
    Pow(Box<ZetaExpr>, u32),
    Neg(Box<ZetaExpr>),
}

/// A pole candidate and where it comes from.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleCandidate {
    pub location: Complex64,
    /// Child indices from the root, dot-separated; empty for the root.
    pub path: String,
    /// The atom in expression syntax.
    pub atom: String,
}

pub type PoleSet = Vec<PoleCandidate>;

fn child_path(path: &str, i: usize) -> String {
    if path.is_empty() {
        i.to_string()
    } else {
        format!("{path}.{i}")
    }
}

fn describe(atom: &str, path: &str) -> String {
    if path.is_empty() {
        atom.to_string()
    } else {
        format!("{atom} at node {path}")
    }
}

impl ZetaExpr {
    pub fn zeta(arg: Affine) -> Self {
        ZetaExpr::ZetaAtom { arg, kind: ZetaKind::Riemann }
    }

    /// Pole locations (in s) of an atom or family node; empty for other nodes.
    fn own_poles(&self) -> Vec<f64> {
        match self {
            ZetaExpr::ZetaAtom { arg, kind } => match kind {
                ZetaKind::Riemann | ZetaKind::Hurwitz(_) => vec![arg.preimage(1.0)],
                ZetaKind::Completed => vec![arg.preimage(0.0), arg.preimage(1.0)],
            },
            ZetaExpr::Family(f) => match f {
                FamilyKind::EzDiagonal(r) => (1..=*r).map(|k| 1.0 / k as f64).collect(),
                FamilyKind::Barnes { r, .. } => (1..=*r).map(|k| k as f64).collect(),
                FamilyKind::Sphere(n) => sphere_mult_poly(*n).map(|p| p.poles()).unwrap_or_default(),
                FamilyKind::SymMat(p) => p.poles(),
            },
            _ => Vec::new(),
        }
    }

    fn collect_poles(&self, path: &str, out: &mut PoleSet) {
        match self {
            ZetaExpr::Add(children) | ZetaExpr::Mul(children) => {
                for (i, c) in children.iter().enumerate() {
                    c.collect_poles(&child_path(path, i), out);
                }
            }
            ZetaExpr::Pow(c, _) | ZetaExpr::Neg(c) => c.collect_poles(&child_path(path, 0), out),
            _ => {
                let atom = self.to_string();
                for p in self.own_poles() {
                    out.push(PoleCandidate {
                        location: Complex64::new(p, 0.0),
                        path: path.to_string(),
                        atom: atom.clone(),
                    });
                }
            }
        }
    }

    /// True when every constant and Dirichlet coefficient is real, so F(conj s) = conj F(s).
    pub fn is_real(&self) -> bool {
        match self {
            ZetaExpr::Const(c) => c.im == 0.0,
            ZetaExpr::DirichletPoly(terms) => terms.iter().all(|(a, _)| a.im == 0.0),
            ZetaExpr::ZetaAtom { .. } | ZetaExpr::Family(_) => true,
            ZetaExpr::Add(cs) | ZetaExpr::Mul(cs) => cs.iter().all(|c| c.is_real()),
            ZetaExpr::Pow(c, _) | ZetaExpr::Neg(c) => c.is_real(),
        }
    }

    fn eval_at(&self, s: Complex64, cfg: &EvalConfig, path: &str) -> Result<ComplexValue> {
        match self {
            ZetaExpr::Const(c) => Ok(ComplexValue::exact(*c)),
            ZetaExpr::DirichletPoly(terms) => {
                let mut acc = ComplexValue::real(0.0);
                for (a, lambda) in terms {
                    acc = acc + ComplexValue::exact(a * (-lambda * s).exp());
                }
                Ok(acc)
            }
            ZetaExpr::Add(children) => {
                let mut acc = ComplexValue::real(0.0);
                for (i, c) in children.iter().enumerate() {
                    acc = acc + c.eval_at(s, cfg, &child_path(path, i))?;
                }
                Ok(acc)
            }
            ZetaExpr::Mul(children) => {
                let mut acc = ComplexValue::real(1.0);
                for (i, c) in children.iter().enumerate() {
                    acc = acc * c.eval_at(s, cfg, &child_path(path, i))?;
                }
                Ok(acc)
            }
            ZetaExpr::Pow(c, k) => Ok(c.eval_at(s, cfg, &child_path(path, 0))?.powi(*k)),
            ZetaExpr::Neg(c) => Ok(-c.eval_at(s, cfg, &child_path(path, 0))?),
            ZetaExpr::ZetaAtom { .. } | ZetaExpr::Family(_) => self.eval_atom(s, cfg, path),
        }
    }

    fn eval_atom(&self, s: Complex64, cfg: &EvalConfig, path: &str) -> Result<ComplexValue> {
        let name = || describe(&self.to_string(), path);
        for p in self.own_poles() {
            let pole = Complex64::new(p, 0.0);
            let distance = (s - pole).norm();
            if distance < cfg.pole_guard {
                return Err(Error::PoleProximity { point: s, pole, distance, source_name: name() });
            }
        }
        let result = match self {
            ZetaExpr::ZetaAtom { arg, kind } => {
                let w = arg.apply(s);
                match kind {
                    ZetaKind::Riemann => riemann_zeta(w, cfg),
                    ZetaKind::Hurwitz(a) => {
                        let a = ratio_f64(*a);
                        if a <= 1.0 {
                            hurwitz_zeta(w, a, cfg)
                        } else {
                            hurwitz_zeta_shifted(w, a, cfg)
                        }
                    }
                    ZetaKind::Completed => completed_zeta(w, cfg),
                }
            }
            ZetaExpr::Family(f) => match f {
                FamilyKind::EzDiagonal(r) => ez_diagonal(*r, s, cfg),
                FamilyKind::Barnes { r, a } => {
                    BarnesParams::new(*r, ratio_f64(*a)).and_then(|p| barnes_zeta(&p, s, cfg))
                }
                FamilyKind::Sphere(n) => sphere_spectral(*n, s, cfg),
                FamilyKind::SymMat(p) => symmat_zeta(p, s, cfg),
            },
            _ => unreachable!("eval_atom on a compound node"),
        };
        result.map_err(|e| match e {
            Error::PoleProximity { point, pole, distance, .. } => Error::PoleProximity {
                point,
                pole,
                distance,
                source_name: name(),
            },
            other => other,
        })
    }
}

pub fn eval_expr(e: &ZetaExpr, s: Complex64, cfg: &EvalConfig) -> Result<ComplexValue> {
    e.eval_at(s, cfg, "")
}

/// Every pole candidate of every atom, in tree order. Candidates are never cancelled.
pub fn pole_set(e: &ZetaExpr) -> PoleSet {
    let mut out = Vec::new();
    e.collect_poles("", &mut out);
    out
}

/// Distinct pole locations, sorted by (Im, Re).
pub fn pole_locations(e: &ZetaExpr) -> Vec<Complex64> {
    let mut locs: Vec<Complex64> = pole_set(e).into_iter().map(|p| p.location).collect();
    locs.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
    locs.dedup();
    locs
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn eval(text: &str, s: Complex64) -> Result<ComplexValue> {
        eval_expr(&parse_expr(text).unwrap(), s, &EvalConfig::default())
    }

    #[test]
    fn two_zeta_two_s() {
        let v = eval("2*zeta(2*s)", c(1.0, 0.0)).unwrap();
        assert!((v.re() - PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn self_cancellation() {
        let v = eval("zeta(s)^2 - zeta(s)^2", c(0.3, 7.0)).unwrap();
        assert!(v.norm() <= 2.0 * v.abs_err.max(f64::EPSILON));
    }

    #[test]
    fn ezd_two() {
        let v = eval("ezd(2)", c(2.0, 0.0)).unwrap();
        assert!((v.re() - PI.powi(4) / 120.0).abs() < 1e-13);
    }

    #[test]
    fn pole_sets() {
        let locs = |t: &str| pole_locations(&parse_expr(t).unwrap());
        assert_eq!(locs("zeta(s) + zeta(2*s)"), vec![c(0.5, 0.0), c(1.0, 0.0)]);
        assert_eq!(locs("barnes(2, 0.3)"), vec![c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(locs("dirichlet[(1,0),(-1, 0.693147)]").is_empty());
        assert_eq!(locs("xi(s+1/2) - xi(s-1/2)"), vec![c(-0.5, 0.0), c(0.5, 0.0), c(1.5, 0.0)]);
        assert_eq!(locs("ezd(3)"), vec![c(1.0 / 3.0, 0.0), c(0.5, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn pole_error_names_the_atom() {
        match eval("3 + zeta(2*s - 1)", c(1.0, 1e-10)).unwrap_err() {
            Error::PoleProximity { source_name, .. } => assert_eq!(source_name, "zeta(2*s - 1) at node 1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hurwitz_atoms() {
        let s = c(0.7, 3.0);
        let h = eval("hurwitz(s, 1/2)", s).unwrap();
        let two_s = (s * std::f64::consts::LN_2).exp();
        let z = eval("zeta(s)", s).unwrap();
        assert!((h.value - (two_s - 1.0) * z.value).norm() < 1e-10);
        let big = eval("hurwitz(s, 5/2)", s).unwrap();
        let prefix = (-s * 0.5f64.ln()).exp() + (-s * 1.5f64.ln()).exp();
        assert!((h.value - prefix - big.value).norm() < 1e-10);
    }

    #[test]
    fn completed_atom() {
        let v = eval("xi(s)", c(2.0, 0.0)).unwrap();
        assert!((v.re() - PI / 6.0).abs() < 1e-12);
    }

    #[test]
    fn dirichlet_polynomial_value() {
        let s = c(1.5, 2.0);
        let v = eval("dirichlet[(1, 0), (-1, 0.6931471805599453)]", s).unwrap();
        let expected = 1.0 - (-s * std::f64::consts::LN_2).exp();
        assert!((v.value - expected).norm() < 1e-15);
    }

    #[test]
    fn families_evaluate() {
        let s = c(3.5, 1.0);
        let cfg = EvalConfig::default();
        let b = eval("barnes(2, 1/3)", s).unwrap();
        let direct = barnes_zeta(&BarnesParams::new(2, 1.0 / 3.0).unwrap(), s, &cfg).unwrap();
        assert_eq!(b.value, direct.value);
        let sp = eval("sphere(3)", c(2.0, 0.0)).unwrap();
        assert!((sp.re() - (PI * PI / 6.0 - 1.0)).abs() < 1e-12);
        assert!(eval("symmat(3, Ln*, +1, -1)", s).is_ok());
    }

    #[test]
    fn realness() {
        assert!(parse_expr("zeta(s) + 2*xi(s)").unwrap().is_real());
        assert!(!parse_expr("zeta(s) + 2i").unwrap().is_real());
    }
}
