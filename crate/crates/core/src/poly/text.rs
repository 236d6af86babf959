//! Canonical text form of polynomials.
//!
//! ```text
//! poly   := term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := var ('^' uint)?
//! coeff  := int | int '/' uint
//! ```
//!
//! The parser also accepts a leading sign, whitespace, newlines between
//! terms, and parenthesised subexpressions (optionally raised to a power).
//! The renderer emits only the core grammar, terms in decreasing monomial
//! order, variables in increasing order inside a term.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, PolyError, Polynomial, VarId};
use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(src[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(PolyError::Syntax { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<C: Coeff>(&mut self) -> Result<Polynomial<C>, PolyError> {
        let mut acc = if self.eat('-') {
            -self.term::<C>()?
        } else {
            self.eat('+');
            self.term::<C>()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term::<C>()?;
            } else if self.eat('-') {
                acc = &acc - &self.term::<C>()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<C: Coeff>(&mut self) -> Result<Polynomial<C>, PolyError> {
        let mut acc = self.factor::<C>()?;
        while self.eat('*') {
            acc = &acc * &self.factor::<C>()?;
        }
        Ok(acc)
    }

    fn uint(&mut self) -> Result<u32, PolyError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let v = u32::try_from(n.clone()).or_else(|_| self.err("exponent too large"))?;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected an unsigned integer"),
        }
    }

    fn factor<C: Coeff>(&mut self) -> Result<Polynomial<C>, PolyError> {
        let start = self.offset();
        let base = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let den = if self.eat('/') {
                    let d = BigInt::from(self.uint()?);
                    if d.is_zero() {
                        return Err(PolyError::Syntax { pos: start, msg: "zero denominator".into() });
                    }
                    d
                } else {
                    BigInt::one()
                };
                let c = C::from_ratio(&n, &den).ok_or_else(|| PolyError::Syntax {
                    pos: start,
                    msg: "coefficient not representable in this ring".into(),
                })?;
                return Ok(Polynomial::constant(c));
            }
            Some(Tok::Ident(name)) => {
                let v = VarId::from_name(&name)
                    .ok_or_else(|| PolyError::Syntax { pos: start, msg: format!("unknown variable {name:?}") })?;
                self.pos += 1;
                Polynomial::var(v)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr::<C>()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                inner
            }
            Some(t) => return self.err(format!("unexpected token {t:?}")),
            None => return self.err("unexpected end of input"),
        };
        if self.eat('^') {
            let e = self.uint()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }
}

/// Parses the canonical grammar into a polynomial over `C`.
pub fn parse<C: Coeff>(src: &str) -> Result<Polynomial<C>, PolyError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len() };
    if p.peek().is_none() {
        return p.err("empty polynomial");
    }
    let out = p.expr::<C>()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

fn write_term<C: Coeff>(out: &mut impl fmt::Write, m: &Monomial, c: &C, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let mag = if neg { -c.clone() } else { c.clone() };
    match (first, neg) {
        (true, true) => out.write_str("-")?,
        (true, false) => {}
        (false, true) => out.write_str(" - ")?,
        (false, false) => out.write_str(" + ")?,
    }
    if m.is_one() {
        return write!(out, "{mag}");
    }
    if !mag.is_one() {
        write!(out, "{mag}*")?;
    }
    write!(out, "{m}")
}

/// Renders the canonical text; `"0"` for the zero polynomial.
pub fn render<C: Coeff>(p: &Polynomial<C>) -> String {
    let mut s = String::new();
    write!(s, "{p}").unwrap();
    s
}

/// Canonical text with one term per line, as stored on disk.
pub fn render_lines<C: Coeff>(p: &Polynomial<C>) -> String {
    if p.is_zero() {
        return "0\n".to_string();
    }
    let mut s = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        write_term(&mut s, m, c, i == 0).unwrap();
        s.push('\n');
    }
    // Continuation terms are written as " + term"; drop the leading blank.
    s.replace("\n + ", "\n+ ").replace("\n - ", "\n- ")
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().iter().enumerate() {
            write_term(f, m, c, i == 0)?;
        }
        Ok(())
    }
}

impl<C: Coeff> FromStr for Polynomial<C> {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{QPoly, ZPoly};

    #[test]
    fn parses_z2() {
        let p: QPoly = parse("x2*t - x1^2").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(render(&p), "t*x2 - x1^2");
    }

    #[test]
    fn zero_renders_as_zero() {
        assert_eq!(render(&QPoly::zero()), "0");
        assert_eq!(render_lines(&QPoly::zero()), "0\n");
    }

    #[test]
    fn rational_and_negative_coefficients() {
        let p: QPoly = parse("-3/2*z2^2 + z4 - 1").unwrap();
        assert_eq!(render(&p), "-3/2*z2^2 + z4 - 1");
        let back: QPoly = render(&p).parse().unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn syntax_errors_report_position() {
        match QPoly::from_str("x1 + * t") {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(QPoly::from_str("x9"), Err(PolyError::Syntax { pos: 0, .. })));
        assert!(matches!(QPoly::from_str("1/0"), Err(PolyError::Syntax { .. })));
        assert!(matches!(QPoly::from_str(""), Err(PolyError::Syntax { .. })));
        assert!(matches!(ZPoly::from_str("1/2*t"), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn multiline_round_trip() {
        let p: ZPoly = parse("3*z2^2*z3 - 9*z2*z5 + 7*z3*z4").unwrap();
        let text = render_lines(&p);
        assert_eq!(text.lines().count(), 3);
        assert_eq!(ZPoly::from_str(&text).unwrap(), p);
    }

    #[test]
    fn parentheses_and_powers() {
        let p: QPoly = parse("(t + x1)^2 - t*(t + 2*x1)").unwrap();
        assert_eq!(p, parse("x1^2").unwrap());
    }
}
