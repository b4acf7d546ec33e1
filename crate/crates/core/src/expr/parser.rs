//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := "-" factor | base ("^" INT)?
//! base   := NUMBER | "(" expr ")" | "zeta" "(" affine ")" | "hurwitz" "(" affine "," RATIONAL ")"
//!         | "xi" "(" affine ")" | "ezd" "(" INT ")" | "barnes" "(" INT "," RATIONAL ")"
//!         | "sphere" "(" INT ")" | "symmat" "(" INT "," ("Ln"|"Ln*") "," SIGN "," SIGN ")"
//!         | "dirichlet" "[" pair ("," pair)* "]"
//! pair   := "(" NUMBER "," NUMBER ")"
//! ```
//!
//! A NUMBER may carry a trailing `i` for an imaginary constant. A minus sign directly in
//! front of a literal that is not raised to a power is folded into the literal.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use super::{ratio_f64, Affine, FamilyKind, ZetaExpr, ZetaKind};
use crate::error::{Error, Result};
use crate::families::barnes::BarnesParams;
use crate::families::hoffman::HOFFMAN_MAX_R;
use crate::families::sphere::SPHERE_MAX_N;
use crate::families::symmat::{Lattice, SymMatrixParams};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { text: String, imag: bool },
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let body = text[start..i].to_string();
            if body.matches('.').count() > 1 || body == "." {
                return Err(Error::Syntax { pos: start, msg: format!("malformed number '{body}'") });
            }
            let imag = i < bytes.len() && bytes[i] == b'i' && !bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric());
            if imag {
                i += 1;
            }
            out.push(Token { tok: Tok::Num { text: body, imag }, pos: start });
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(text[start..i].to_string()), pos: start });
        } else if "+-*^/(),[]".contains(c) {
            out.push(Token { tok: Tok::Sym(c), pos: start });
            i += 1;
        } else {
            let ch = text[start..].chars().next().unwrap_or('?');
            return Err(Error::Syntax { pos: start, msg: format!("unexpected character '{ch}'") });
        }
    }
    out.push(Token { tok: Tok::End, pos: text.len() });
    Ok(out)
}

/// Exact value of a decimal literal such as "0.3" or "2.5e-1".
fn decimal_to_rational(text: &str, pos: usize) -> Result<Rational64> {
    let overflow = || Error::Syntax { pos, msg: format!("'{text}' is too large for an exact rational") };
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(k) => (&text[..k], text[k + 1..].parse::<i32>().map_err(|_| overflow())?),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0" } else { &digits };
    let numer: i64 = digits.parse().map_err(|_| overflow())?;
    let exp10 = exponent - frac_part.len() as i32;
    let pow = 10i64.checked_pow(exp10.unsigned_abs()).ok_or_else(overflow)?;
    if exp10 >= 0 {
        Ok(Rational64::from_integer(numer.checked_mul(pow).ok_or_else(overflow)?))
    } else {
        Ok(Rational64::new(numer, pow))
    }
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.at + k).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.syntax(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<ZetaExpr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(ZetaExpr::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { ZetaExpr::Add(terms) })
    }

    fn term(&mut self) -> Result<ZetaExpr> {
        let mut factors = vec![self.factor()?];
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { ZetaExpr::Mul(factors) })
    }

    fn literal_follows(&self) -> bool {
        matches!(self.peek_at(1), Tok::Num { .. }) && *self.peek_at(2) != Tok::Sym('^') && *self.peek_at(2) != Tok::Sym('/')
    }

    fn factor(&mut self) -> Result<ZetaExpr> {
        if *self.peek() == Tok::Sym('-') {
            if self.literal_follows() {
                self.bump();
                let c = self.number()?;
                return Ok(ZetaExpr::Const(-c));
            }
            self.bump();
            return Ok(ZetaExpr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.eat('^') {
            let k = self.int("exponent")?;
            if k == 0 {
                return self.syntax("exponent must be at least 1");
            }
            let k = u32::try_from(k).or_else(|_| self.syntax("exponent too large"))?;
            return Ok(ZetaExpr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    /// NUMBER with optional trailing `i`, or a `p/q` quotient of real literals.
    fn number(&mut self) -> Result<Complex64> {
        let pos = self.pos();
        let Tok::Num { text, imag } = self.bump().tok else {
            return Err(Error::Syntax { pos, msg: "expected a number".into() });
        };
        let x: f64 = text.parse().map_err(|_| Error::Syntax { pos, msg: format!("bad number '{text}'") })?;
        if imag {
            return Ok(Complex64::new(0.0, x));
        }
        if *self.peek() == Tok::Sym('/') {
            self.bump();
            let q = self.number()?;
            if q.im != 0.0 || q.re == 0.0 {
                return Err(Error::Syntax { pos, msg: "denominator must be a non-zero real".into() });
            }
            return Ok(Complex64::new(x / q.re, 0.0));
        }
        Ok(Complex64::new(x, 0.0))
    }

    fn signed_number(&mut self) -> Result<Complex64> {
        if self.eat('-') {
            return Ok(-self.number()?);
        }
        self.eat('+');
        self.number()
    }

    fn int(&mut self, what: &str) -> Result<u64> {
        let pos = self.pos();
        match self.bump().tok {
            Tok::Num { text, imag: false } if text.bytes().all(|b| b.is_ascii_digit()) => {
                text.parse().map_err(|_| Error::Syntax { pos, msg: format!("{what} '{text}' is too large") })
            }
            _ => Err(Error::Syntax { pos, msg: format!("expected an integer {what}") }),
        }
    }

    /// Unsigned rational: decimal literal, optionally divided by another literal.
    fn rational(&mut self) -> Result<Rational64> {
        let pos = self.pos();
        let Tok::Num { text, imag: false } = self.bump().tok else {
            return Err(Error::Syntax { pos, msg: "expected a rational number".into() });
        };
        let mut r = decimal_to_rational(&text, pos)?;
        if *self.peek() == Tok::Sym('/') {
            self.bump();
            let qpos = self.pos();
            let Tok::Num { text: qtext, imag: false } = self.bump().tok else {
                return Err(Error::Syntax { pos: qpos, msg: "expected a denominator".into() });
            };
            let q = decimal_to_rational(&qtext, qpos)?;
            if q.is_zero() {
                return Err(Error::Syntax { pos: qpos, msg: "division by zero".into() });
            }
            r /= q;
        }
        Ok(r)
    }

    fn signed_rational(&mut self) -> Result<Rational64> {
        if self.eat('-') {
            return Ok(-self.rational()?);
        }
        self.eat('+');
        self.rational()
    }

    fn affine(&mut self) -> Result<Affine> {
        let start = self.pos();
        let mut alpha = Rational64::zero();
        let mut beta = Rational64::zero();
        let mut first = true;
        loop {
            let negative = if self.eat('-') {
                true
            } else if self.eat('+') {
                false
            } else if first {
                false
            } else {
                break;
            };
            first = false;
            let sign = |r: Rational64| if negative { -r } else { r };
            if *self.peek() == Tok::Ident("s".into()) {
                self.bump();
                let mut coeff = Rational64::from_integer(1);
                if self.eat('/') {
                    let q = self.rational()?;
                    if q.is_zero() {
                        return self.syntax("division by zero");
                    }
                    coeff /= q;
                }
                alpha += sign(coeff);
            } else {
                let c = self.rational()?;
                if self.eat('*') {
                    if *self.peek() != Tok::Ident("s".into()) {
                        return self.syntax("expected 's' after '*' in an affine argument");
                    }
                    self.bump();
                    alpha += sign(c);
                } else if *self.peek() == Tok::Ident("s".into()) {
                    self.bump();
                    alpha += sign(c);
                } else {
                    beta += sign(c);
                }
            }
        }
        if alpha.is_zero() {
            return Err(Error::Syntax { pos: start, msg: "argument must be of the form a*s + b with a != 0".into() });
        }
        Ok(Affine { alpha, beta })
    }

    fn sign_param(&mut self, name: &str) -> Result<i8> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        match self.int("sign")? {
            1 => Ok(if negative { -1 } else { 1 }),
            _ => Err(Error::Arity { name: name.into(), msg: "signs must be +1 or -1".into() }),
        }
    }

    fn base(&mut self) -> Result<ZetaExpr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num { .. } => Ok(ZetaExpr::Const(self.number()?)),
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                self.call(&name, pos)
            }
            Tok::End => self.syntax("unexpected end of input"),
            Tok::Sym(c) => self.syntax(format!("unexpected '{c}'")),
        }
    }

    fn call(&mut self, name: &str, pos: usize) -> Result<ZetaExpr> {
        let arity = |msg: String| Error::Arity { name: name.to_string(), msg };
        if name == "dirichlet" {
            self.expect('[')?;
            let mut terms = Vec::new();
            loop {
                self.expect('(')?;
                let a = self.signed_number()?;
                self.expect(',')?;
                let lambda = self.signed_number()?;
                if lambda.im != 0.0 {
                    return Err(arity("exponents must be real".into()));
                }
                self.expect(')')?;
                terms.push((a, lambda.re));
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(']')?;
            return Ok(ZetaExpr::DirichletPoly(terms));
        }

        let known = ["zeta", "hurwitz", "xi", "ezd", "barnes", "sphere", "symmat"];
        if !known.contains(&name) {
            return Err(Error::UnknownFamily { name: name.to_string(), pos });
        }
        self.expect('(')?;
        let node = match name {
            "zeta" | "xi" => {
                let arg = self.affine()?;
                let kind = if name == "zeta" { ZetaKind::Riemann } else { ZetaKind::Completed };
                ZetaExpr::ZetaAtom { arg, kind }
            }
            "hurwitz" => {
                let arg = self.affine()?;
                if !self.eat(',') {
                    return Err(arity("expected hurwitz(affine, a)".into()));
                }
                let a = self.signed_rational()?;
                if !a.is_positive() {
                    return Err(arity("shift a must be positive".into()));
                }
                ZetaExpr::ZetaAtom { arg, kind: ZetaKind::Hurwitz(a) }
            }
            "ezd" => {
                let r = self.int("depth")? as usize;
                if r == 0 || r > HOFFMAN_MAX_R {
                    return Err(arity(format!("depth must lie in 1..={HOFFMAN_MAX_R}")));
                }
                ZetaExpr::Family(FamilyKind::EzDiagonal(r))
            }
            "barnes" => {
                let r = self.int("depth")? as usize;
                if !self.eat(',') {
                    return Err(arity("expected barnes(r, a)".into()));
                }
                let a = self.signed_rational()?;
                BarnesParams::new(r, ratio_f64(a)).map_err(|e| arity(e.to_string()))?;
                if !a.is_positive() {
                    return Err(arity("shift a must be positive".into()));
                }
                ZetaExpr::Family(FamilyKind::Barnes { r, a })
            }
            "sphere" => {
                let n = self.int("dimension")? as usize;
                if n == 0 || n > SPHERE_MAX_N {
                    return Err(arity(format!("dimension must lie in 1..={SPHERE_MAX_N}")));
                }
                ZetaExpr::Family(FamilyKind::Sphere(n))
            }
            "symmat" => {
                let n = self.int("size")? as usize;
                self.expect(',')?;
                let lattice = match self.bump().tok {
                    Tok::Ident(l) if l == "Ln" => {
                        if self.eat('*') {
                            Lattice::LnStar
                        } else {
                            Lattice::Ln
                        }
                    }
                    _ => return Err(arity("lattice must be Ln or Ln*".into())),
                };
                self.expect(',')?;
                let eta = self.sign_param(name)?;
                self.expect(',')?;
                let theta = self.sign_param(name)?;
                let p = SymMatrixParams::new(n, lattice, eta, theta).map_err(|e| arity(e.to_string()))?;
                ZetaExpr::Family(FamilyKind::SymMat(p))
            }
            _ => unreachable!(),
        };
        if *self.peek() == Tok::Sym(',') {
            return Err(arity("too many arguments".into()));
        }
        self.expect(')')?;
        Ok(node)
    }
}

pub fn parse_expr(text: &str) -> Result<ZetaExpr> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.syntax("unexpected trailing input");
    }
    Ok(e)
}
