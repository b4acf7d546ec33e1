use std::f64::consts::PI;

use clap::ValueEnum;
use num_complex::Complex64;
use serde::Serialize;
use zetazero::expr::{eval_expr, parse_expr};
use zetazero::families::{
    barnes_direct, barnes_zeta, ez_diagonal, ez_direct, linear_form_eval, sphere_closed_form, sphere_direct,
    sphere_spectral, BarnesParams, LinearFormSeries,
};
use zetazero::numerics::{hurwitz_zeta, riemann_zeta};
use zetazero::{EvalConfig, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Oracles,
    Symmetry,
    All,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub suite: &'static str,
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Rows<'a> {
    suite: &'static str,
    cfg: &'a EvalConfig,
    rows: Vec<CheckRow>,
}

impl Rows<'_> {
    fn push(&mut self, name: impl Into<String>, threshold: f64, f: impl FnOnce(&EvalConfig) -> Result<f64>) {
        let name = name.into();
        let row = match f(self.cfg) {
            Ok(residual) => CheckRow {
                suite: self.suite,
                name,
                residual,
                threshold,
                pass: residual.is_finite() && residual < threshold,
                error: None,
            },
            Err(e) => CheckRow {
                suite: self.suite,
                name,
                residual: f64::INFINITY,
                threshold,
                pass: false,
                error: Some(e.to_string()),
            },
        };
        self.rows.push(row);
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn identities(rows: &mut Rows) {
    for (s1, s2) in [(c(2.0, 0.0), c(3.0, 0.0)), (c(1.5, 4.0), c(2.5, -1.0)), (c(4.0, 0.0), c(2.0, 0.0))] {
        rows.push(format!("harmonic product at ({s1}, {s2})"), 1e-9, |cfg| {
            let z = |s| riemann_zeta(s, cfg).map(|v| v.value);
            let a = ez_direct(&[s1, s2], cfg)?.value;
            let b = ez_direct(&[s2, s1], cfg)?.value;
            Ok((z(s1)? * z(s2)? - a - b - z(s1 + s2)?).norm())
        });
    }
    for (r, exact) in [(2, PI.powi(4) / 120.0), (3, PI.powi(6) / 5040.0), (4, PI.powi(8) / 362_880.0)] {
        rows.push(format!("ezd({r}) at s = 2 against pi^{}/{}!", 2 * r, 2 * r + 1), 1e-10, |cfg| {
            Ok((ez_diagonal(r, c(2.0, 0.0), cfg)?.value - exact).norm())
        });
    }
    for s in [c(2.5, 0.0), c(3.0, 2.0)] {
        rows.push(format!("Hoffman r = 3 at {s}"), 1e-8, |cfg| {
            let z = |s| riemann_zeta(s, cfg).map(|v| v.value);
            let d = ez_direct(&[s, s, s], cfg)?.value;
            let lhs = z(s)?.powu(3);
            Ok((lhs - 6.0 * d - 3.0 * z(s)? * z(2.0 * s)? + 2.0 * z(3.0 * s)?).norm())
        });
    }
    for a in [0.3, 0.5] {
        for s in [c(3.0, 0.0), c(0.5, 7.0)] {
            rows.push(format!("barnes(2, {a}) shift identity at {s}"), 1e-8, |cfg| {
                let lhs = barnes_zeta(&BarnesParams::new(2, a)?, s, cfg)?.value;
                let rhs = (1.0 - a) * hurwitz_zeta(s, a, cfg)?.value + hurwitz_zeta(s - 1.0, a, cfg)?.value;
                Ok((lhs - rhs).norm())
            });
        }
    }
    for n in 1..=4 {
        for s in [c(2.6, 0.0), c(3.1, -7.5), c(4.4, 12.0)] {
            rows.push(format!("sphere({n}) closed form at {s}"), 1e-10, |cfg| {
                Ok((sphere_spectral(n, s, cfg)?.value - sphere_closed_form(n, s, cfg)?.value).norm())
            });
        }
    }
    for t in [5.0, 10.0, 30.0] {
        rows.push(format!("Lindelof identity at t = {t}"), 1e-8, |cfg| {
            let s = c(0.5, t);
            let z = riemann_zeta(s, cfg)?.value;
            let d = ez_diagonal(2, s, cfg)?.value;
            Ok((z * z - 2.0 * d - riemann_zeta(c(1.0, 2.0 * t), cfg)?.value).norm())
        });
    }
}

fn oracles(rows: &mut Rows) {
    for r in 2..=5 {
        for s in [c(2.5, 0.0), c(3.0, 2.0)] {
            rows.push(format!("ezd({r}) against nested sum at {s}"), 1e-7, |cfg| {
                Ok(rel(ez_diagonal(r, s, cfg)?.value, ez_direct(&vec![s; r], cfg)?.value))
            });
        }
    }
    for r in [2usize, 3] {
        for a in [0.3, 0.5, 1.0] {
            for s in [c(r as f64 + 1.0, 0.0), c(r as f64 + 1.5, 2.0)] {
                rows.push(format!("barnes({r}, {a}) against direct sum at {s}"), 1e-8, |cfg| {
                    let p = BarnesParams::new(r, a)?;
                    Ok(rel(barnes_zeta(&p, s, cfg)?.value, barnes_direct(&p, s, cfg)?.value))
                });
            }
        }
    }
    for n in 2..=4 {
        for t in [0.0, 3.5] {
            let s = c(n as f64 / 2.0 + 1.0, t);
            rows.push(format!("sphere({n}) against eigenvalue sum at {s}"), 1e-8, |cfg| {
                Ok((sphere_spectral(n, s, cfg)?.value - sphere_direct(n, s, cfg)?.value).norm())
            });
        }
    }
    let s = [c(2.0, 0.0); 3];
    rows.push("Mordell r = 2 at (2,2,2) against pi^6/2835", 2e-6, |cfg| {
        let cfg = cfg.with_target(1e-6);
        Ok((linear_form_eval(&LinearFormSeries::mordell(2, 0.0), &s, &cfg)?.value - PI.powi(6) / 2835.0).norm())
    });
    rows.push("Witten A2 against Mordell r = 2 at (2,2,2)", 2e-6, |cfg| {
        let cfg = cfg.with_target(1e-6);
        let w = linear_form_eval(&LinearFormSeries::witten_a2(), &s, &cfg)?.value;
        let m = linear_form_eval(&LinearFormSeries::mordell(2, 0.0), &s, &cfg)?.value;
        Ok((w - m).norm())
    });
}

fn symmetry(rows: &mut Rows) {
    let exprs = [
        "zeta(s)",
        "hurwitz(s, 1/3)",
        "xi(s)",
        "ezd(3)",
        "barnes(2, 1/3)",
        "sphere(3)",
        "symmat(3, Ln, +1, +1)",
        "zeta(s)^2 - zeta(2*s)",
    ];
    for src in exprs {
        for s in [c(0.7, 12.0), c(2.5, -3.0)] {
            rows.push(format!("{src} conjugation at {s}"), 1e-10, |cfg| {
                let e = parse_expr(src)?;
                Ok(rel(eval_expr(&e, s.conj(), cfg)?.value, eval_expr(&e, s, cfg)?.value.conj()))
            });
        }
    }
    for s in [c(0.3, 20.0), c(-1.5, 4.0)] {
        rows.push(format!("xi functional equation at {s}"), 1e-10, |cfg| {
            let e = parse_expr("xi(s)")?;
            Ok(rel(eval_expr(&e, 1.0 - s, cfg)?.value, eval_expr(&e, s, cfg)?.value))
        });
    }
}

pub fn run(suite: Suite, cfg: &EvalConfig) -> Vec<CheckRow> {
    let mut out = Vec::new();
    let plan: [(Suite, &'static str, fn(&mut Rows)); 3] = [
        (Suite::Identities, "identities", identities),
        (Suite::Oracles, "oracles", oracles),
        (Suite::Symmetry, "symmetry", symmetry),
    ];
    for (which, name, f) in plan {
        if suite == which || suite == Suite::All {
            let mut rows = Rows { suite: name, cfg, rows: Vec::new() };
            f(&mut rows);
            out.extend(rows.rows);
        }
    }
    out
}
