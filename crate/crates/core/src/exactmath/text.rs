//! Canonical text form and a small expression parser.
//!
//! Polynomials print as `c * n^i * l^j * x^k * ...` with the terms in
//! graded-lexicographic order (highest total degree first, ties broken
//! lexicographically with `n` most significant). Variables with zero
//! exponent are omitted and exponent 1 is written bare. Rational expressions
//! with a non-trivial denominator print as `(num) / (den)`.
//!
//! The parser accepts `+ - * / ^`, parentheses, integer literals and the
//! variable names, which is a strict superset of what the printer emits.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;


use super::poly::{Exps, MultiPoly};
use super::ratexpr::RationalExpr;
use super::var::Var;
use super::MathError;

fn grlex_desc(a: &Exps, b: &Exps) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

fn format_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn format_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&Exps, &BigRational)> = p.terms().collect();
    terms.sort_by(|a, b| grlex_desc(a.0, b.0));
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        out.push_str(&format_rational(c));
        for v in Var::ALL {
            let k = e[v.index()];
            if k == 1 {
                out.push_str(" * ");
                out.push_str(v.name());
            } else if k > 1 {
                out.push_str(&format!(" * {}^{}", v.name(), k));
            }
        }
    }
    out
}

pub fn format_expr(e: &RationalExpr) -> String {
    if e.den().is_one() {
        format_poly(e.num())
    } else {
        format!("({}) / ({})", format_poly(e.num()), format_poly(e.den()))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, MathError> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = chars[st..i].iter().collect();
            out.push(Tok::Num(lit.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let name: String = chars[st..i].iter().collect();
            let v = Var::from_name(&name).ok_or_else(|| MathError::Parse(format!("unknown variable `{name}`")))?;
            out.push(Tok::Var(v));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(MathError::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalExpr, MathError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalExpr, MathError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(MathError::DivisionByZeroPoly);
                }
                acc = &acc / &d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalExpr, MathError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalExpr, MathError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(k)) => {
                    let k: i32 = k.try_into().map_err(|_| MathError::Parse("exponent too large".into()))?;
                    self.pos += 1;
                    k
                }
                _ => return Err(MathError::Parse("expected integer exponent".into())),
            };
            if neg && base.is_zero() {
                return Err(MathError::DivisionByZeroPoly);
            }
            return Ok(base.pow(if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalExpr, MathError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(k)) => {
                self.pos += 1;
                Ok(RationalExpr::constant(BigRational::from_integer(k)))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(RationalExpr::var(v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(MathError::Parse("missing `)`".into()));
                }
                Ok(e)
            }
            other => Err(MathError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<RationalExpr, MathError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(MathError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(MathError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}

/// Parse text that must denote a polynomial.
pub fn parse_poly(s: &str) -> Result<MultiPoly, MathError> {
    parse_expr(s)?
        .to_poly()
        .ok_or_else(|| MathError::Parse("expression is not a polynomial".into()))
}
