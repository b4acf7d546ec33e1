use std::fmt::{self, Write};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed};

use super::{Affine, FamilyKind, ZetaExpr, ZetaKind};

// Binding strength of the surrounding context.
const SUM: u8 = 0;
const PRODUCT: u8 = 1;
const FACTOR: u8 = 2;
const BASE: u8 = 3;

pub(crate) fn fmt_rational(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_const(c: Complex64) -> String {
    match (c.re, c.im) {
        (re, im) if im == 0.0 => format!("{re}"),
        (re, im) if re == 0.0 => format!("{im}i"),
        (re, im) if im < 0.0 => format!("({re} - {}i)", -im),
        (re, im) => format!("({re} + {im}i)"),
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alpha.is_one() {
            f.write_str("s")?;
        } else if self.alpha == -Rational64::one() {
            f.write_str("-s")?;
        } else {
            write!(f, "{}*s", fmt_rational(self.alpha))?;
        }
        if self.beta.is_positive() {
            write!(f, " + {}", fmt_rational(self.beta))?;
        } else if self.beta.is_negative() {
            write!(f, " - {}", fmt_rational(-self.beta))?;
        }
        Ok(())
    }
}

fn fmt_family(f: &FamilyKind, out: &mut String) {
    match f {
        FamilyKind::EzDiagonal(r) => write!(out, "ezd({r})"),
        FamilyKind::Barnes { r, a } => write!(out, "barnes({r}, {})", fmt_rational(*a)),
        FamilyKind::Sphere(n) => write!(out, "sphere({n})"),
        FamilyKind::SymMat(p) => {
            let sign = |v: i8| if v > 0 { "+1" } else { "-1" };
            write!(out, "symmat({}, {}, {}, {})", p.n, p.lattice, sign(p.eta), sign(p.theta))
        }
    }
    .expect("writing to a String cannot fail");
}

fn needs_fold_guard(e: &ZetaExpr) -> bool {
    // "-3" would read back as a single negative literal
    matches!(e, ZetaExpr::Const(c) if c.re == 0.0 || c.im == 0.0)
}

fn write_expr(e: &ZetaExpr, ctx: u8, out: &mut String) {
    let own = match e {
        ZetaExpr::Add(_) => SUM,
        ZetaExpr::Mul(_) => PRODUCT,
        ZetaExpr::Pow(..) | ZetaExpr::Neg(_) => FACTOR,
        ZetaExpr::Const(c) => {
            let text = fmt_const(*c);
            if ctx >= BASE && text.starts_with('-') {
                out.push('(');
                out.push_str(&text);
                out.push(')');
            } else {
                out.push_str(&text);
            }
            return;
        }
        _ => BASE,
    };
    let wrap = own < ctx;
    if wrap {
        out.push('(');
    }
    match e {
        ZetaExpr::Add(children) => {
            for (i, c) in children.iter().enumerate() {
                match c {
                    ZetaExpr::Neg(inner) if i > 0 => {
                        out.push_str(" - ");
                        write_expr(inner, PRODUCT, out);
                    }
                    _ => {
                        if i > 0 {
                            out.push_str(" + ");
                        }
                        write_expr(c, PRODUCT, out);
                    }
                }
            }
            if children.is_empty() {
                out.push('0');
            }
        }
        ZetaExpr::Mul(children) => {
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                write_expr(c, FACTOR, out);
            }
            if children.is_empty() {
                out.push('1');
            }
        }
        ZetaExpr::Neg(inner) => {
            out.push('-');
            if needs_fold_guard(inner) {
                out.push('(');
                write_expr(inner, SUM, out);
                out.push(')');
            } else {
                write_expr(inner, FACTOR, out);
            }
        }
        ZetaExpr::Pow(base, k) => {
            write_expr(base, BASE, out);
            write!(out, "^{k}").expect("writing to a String cannot fail");
        }
        ZetaExpr::DirichletPoly(terms) => {
            out.push_str("dirichlet[");
            for (i, (a, lambda)) in terms.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write!(out, "({}, {lambda})", fmt_const(*a)).expect("writing to a String cannot fail");
            }
            out.push(']');
        }
        ZetaExpr::ZetaAtom { arg, kind } => {
            match kind {
                ZetaKind::Riemann => write!(out, "zeta({arg})"),
                ZetaKind::Hurwitz(a) => write!(out, "hurwitz({arg}, {})", fmt_rational(*a)),
                ZetaKind::Completed => write!(out, "xi({arg})"),
            }
            .expect("writing to a String cannot fail");
        }
        ZetaExpr::Family(f) => fmt_family(f, out),
        ZetaExpr::Const(_) => unreachable!(),
    }
    if wrap {
        out.push(')');
    }
}

impl fmt::Display for ZetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_expr(self, SUM, &mut out);
        f.write_str(&out)
    }
}
