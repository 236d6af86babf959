//! The recipe language: one named construction per line.
//!
//! ```text
//! line    := name "=" expr | "#" comment
//! expr    := "[" expr "," expr "]" ("^" uint)? | product
//! product := atom ("*" atom)*
//! atom    := name ("^" uint)? | "t"
//! ```
//!
//! A trailing or preceding `# ord=K` annotation records the expected order.
//! It lets the exponent of the outermost bracket be omitted, in which case
//! the exponent is solved from `ord = ord(a) + ord(b) - 2r`.

use rustc_hash::FxHashMap;

use super::expr::ConstructionExpr;
use crate::error::{Error, Result};
use crate::grading::FormDegree;

/// Expression as written, with possibly missing bracket exponents.
#[derive(Clone, Debug, PartialEq)]
pub enum RawExpr {
    T,
    Gen(String),
    Product(Vec<(RawExpr, u32)>),
    St(Box<RawExpr>, Box<RawExpr>, Option<u32>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecipeLine {
    pub line: usize,
    pub name: String,
    pub expr: RawExpr,
    pub ord: Option<i64>,
}

#[derive(Clone, Debug, Default)]
pub struct Recipe {
    pub lines: Vec<RecipeLine>,
}

/// A line of the recipe with every exponent known.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedLine {
    pub line: usize,
    pub name: String,
    pub expr: ConstructionExpr,
    pub degree: i64,
    pub weight: i64,
}

impl ResolvedLine {
    pub fn order(&self, d: FormDegree) -> i64 {
        d.as_i64() * self.degree - 2 * self.weight
    }
}

fn parse_ord(comment: &str) -> Option<i64> {
    let rest = comment.trim().strip_prefix("ord")?.trim_start().strip_prefix('=')?;
    let digits: String = rest.trim_start().chars().take_while(|c| c.is_ascii_digit() || *c == '-').collect();
    digits.parse().ok()
}

impl Recipe {
    pub fn parse(src: &str) -> Result<Recipe> {
        let mut lines = Vec::new();
        let mut pending_ord = None;
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            let (body, comment) = match raw.find('#') {
                Some(p) => (&raw[..p], Some(&raw[p + 1..])),
                None => (raw, None),
            };
            let ord = comment.and_then(parse_ord);
            if body.trim().is_empty() {
                if ord.is_some() {
                    pending_ord = ord;
                }
                continue;
            }
            let (name, rhs) =
                body.split_once('=').ok_or_else(|| Error::Recipe { line, msg: "expected `name = expr`".into() })?;
            let name = name.trim();
            if !is_name(name) || name == "t" {
                return Err(Error::Recipe { line, msg: format!("invalid name {name:?}") });
            }
            let mut p = Parser { src: rhs.as_bytes(), pos: 0, line };
            let expr = p.expr()?;
            p.skip_ws();
            if p.pos != p.src.len() {
                return Err(p.err("trailing input"));
            }
            lines.push(RecipeLine { line, name: name.to_string(), expr, ord: ord.or(pending_ord.take()) });
            pending_ord = None;
        }
        Ok(Recipe { lines })
    }

    /// Fills in missing exponents and checks annotated orders.
    ///
    /// `known` supplies `(degree, weight)` for names defined outside the recipe.
    pub fn resolve(&self, d: FormDegree, known: &FxHashMap<String, (i64, i64)>) -> Result<Vec<ResolvedLine>> {
        let mut grades = known.clone();
        let mut out = Vec::with_capacity(self.lines.len());
        for l in &self.lines {
            if grades.contains_key(&l.name) {
                return Err(Error::Recipe { line: l.line, msg: format!("{} defined twice", l.name) });
            }
            let ctx = Resolver { d, grades: &grades, line: l.line };
            let (expr, degree, weight) = ctx.resolve(&l.expr, l.ord, true)?;
            let order = d.as_i64() * degree - 2 * weight;
            if let Some(k) = l.ord {
                if k != order {
                    return Err(Error::Recipe {
                        line: l.line,
                        msg: format!("{} has order {order}, annotated {k}", l.name),
                    });
                }
            }
            grades.insert(l.name.clone(), (degree, weight));
            out.push(ResolvedLine { line: l.line, name: l.name.clone(), expr, degree, weight });
        }
        Ok(out)
    }
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Resolver<'a> {
    d: FormDegree,
    grades: &'a FxHashMap<String, (i64, i64)>,
    line: usize,
}

impl Resolver<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Recipe { line: self.line, msg: msg.into() }
    }

    fn ord(&self, deg: i64, wt: i64) -> i64 {
        self.d.as_i64() * deg - 2 * wt
    }

    fn resolve(&self, e: &RawExpr, target: Option<i64>, outer: bool) -> Result<(ConstructionExpr, i64, i64)> {
        match e {
            RawExpr::T => Ok((ConstructionExpr::T, 1, 0)),
            RawExpr::Gen(n) => {
                let &(deg, wt) = self.grades.get(n).ok_or_else(|| self.err(format!("undefined name {n}")))?;
                Ok((ConstructionExpr::Gen(n.clone()), deg, wt))
            }
            RawExpr::Product(fs) => {
                let (mut deg, mut wt, mut parts) = (0, 0, Vec::new());
                for (f, k) in fs {
                    let (g, a, b) = self.resolve(f, None, false)?;
                    deg += a * *k as i64;
                    wt += b * *k as i64;
                    parts.push((g, *k));
                }
                Ok((ConstructionExpr::product(parts), deg, wt))
            }
            RawExpr::St(a, b, r) => {
                let (ea, da, wa) = self.resolve(a, None, false)?;
                let (eb, db, wb) = self.resolve(b, None, false)?;
                let (m, k) = (self.ord(da, wa), self.ord(db, wb));
                let r = match (r, target) {
                    (Some(r), _) => *r as i64,
                    (None, Some(ord)) if outer => {
                        let twice = m + k - ord;
                        if twice < 0 || twice % 2 != 0 {
                            return Err(self.err(format!("no exponent gives order {ord} from orders {m}, {k}")));
                        }
                        twice / 2
                    }
                    _ => return Err(self.err("missing exponent and no `# ord=` annotation")),
                };
                if r > m.min(k) {
                    return Err(self.err(format!("exponent {r} exceeds operand orders ({m}, {k})")));
                }
                Ok((ConstructionExpr::st(ea, eb, r as u32), da + db, wa + wb + r))
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Recipe { line: self.line, msg: format!("{msg} at column {}", self.pos + 1) }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {:?}", c as char)))
        }
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().map_err(|_| self.err("expected an integer"))
    }

    fn exponent(&mut self) -> Result<Option<u32>> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            Ok(Some(self.uint()?))
        } else {
            Ok(None)
        }
    }

    fn expr(&mut self) -> Result<RawExpr> {
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let a = self.expr()?;
            self.expect(b',')?;
            let b = self.expr()?;
            self.expect(b']')?;
            let r = self.exponent()?;
            return Ok(RawExpr::St(Box::new(a), Box::new(b), r));
        }
        let mut factors = vec![self.atom()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            factors.push(self.atom()?);
        }
        if factors.len() == 1 && factors[0].1 == 1 {
            return Ok(factors.pop().unwrap().0);
        }
        Ok(RawExpr::Product(factors))
    }

    fn atom(&mut self) -> Result<(RawExpr, u32)> {
        let atom = if self.peek() == Some(b'[') {
            self.expr()?
        } else {
            let start = self.pos;
            while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            if !is_name(name) {
                return Err(self.err("expected a name"));
            }
            if name == "t" {
                RawExpr::T
            } else {
                RawExpr::Gen(name.to_string())
            }
        };
        let e = self.exponent()?.unwrap_or(1);
        Ok((atom, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D7: FormDegree = FormDegree::SEPTIC;

    fn resolve(src: &str) -> Result<Vec<ResolvedLine>> {
        Recipe::parse(src)?.resolve(D7, &FxHashMap::default())
    }

    #[test]
    fn parses_and_grades() {
        let lines = resolve("dv_1 = [t,t]^4\ntr_1 = [t, dv_1]^4 # ord=5\nw = tr_1*dv_1^2").unwrap();
        assert_eq!(lines[0].expr.to_string(), "[t,t]^4");
        assert_eq!(lines[0].order(D7), 6);
        assert_eq!(lines[1].order(D7), 5);
        assert_eq!(lines[2].expr.to_string(), "tr_1*dv_1^2");
        assert_eq!((lines[2].degree, lines[2].order(D7)), (7, 17));
    }

    #[test]
    fn annotated_order_mismatch_is_reported() {
        let err = resolve("dv_1 = [t,t]^4\ntr_1 = [t, dv_1]^4 # ord=7").unwrap_err();
        assert!(matches!(err, Error::Recipe { line: 2, .. }));
    }

    #[test]
    fn missing_exponent_solved_from_order() {
        let lines = resolve("# ord=2\ndv_2 = [t,t]").unwrap();
        assert_eq!(lines[0].expr.to_string(), "[t,t]^6");
        assert!(matches!(resolve("dv = [t,t]"), Err(Error::Recipe { line: 1, .. })));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(resolve("a = [t,t]^2\nb = [t,a]^"), Err(Error::Recipe { line: 2, .. })));
        assert!(matches!(resolve("a = [t,q]^2"), Err(Error::Recipe { line: 1, .. })));
        assert!(matches!(resolve("a = [t,t]^8"), Err(Error::Recipe { line: 1, .. })));
    }
}
