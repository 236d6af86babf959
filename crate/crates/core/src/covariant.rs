//! Covariants, their leading coefficients, and semitransvectants.
//!
//! The semitransvectant `[f, g]^r` is the leading coefficient of the
//! transvectant of the covariants reconstructed from `f` and `g`, scaled to a
//! primitive integer numerator. It is evaluated without building covariants:
//! with `m = ord f`, `k = ord g`,
//!
//! ```text
//! kappa((F, G)^r) = sum_i (-1)^i C(r, i) D^i(f) / [m]_i * D^(r-i)(g) / [k]_(r-i)
//! ```
//!
//! where the `D`-powers are taken in the canonical coordinates `(t, x1, z)`
//! and `x1` is set to zero afterwards. The `x1`-terms of the full sum cancel;
//! the checked mode asserts this.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::derivation::{d1, d2, DerivationRule};
use crate::error::{Error, Result};
use crate::fraction::TFraction;
use crate::grading::{grading_of, x_expand, FormDegree};
use crate::poly::{Monomial, VarId};
use crate::scalar::{binomial, falling_factorial};
use crate::{Integer, QPoly, Rational, ZPoly};

/// A polynomial homogeneous of some order in `Y1, Y2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Covariant {
    poly: QPoly,
    order: u32,
}

fn y_degree(m: &Monomial) -> u32 {
    m.exponent(VarId::Y1) + m.exponent(VarId::Y2)
}

impl Covariant {
    pub fn new(poly: QPoly) -> Result<Self> {
        let mut degs = poly.terms().iter().map(|(m, _)| y_degree(m));
        let order = degs.next().unwrap_or(0);
        if degs.any(|e| e != order) {
            return Err(Error::NotCovariant);
        }
        Ok(Covariant { poly, order })
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

/// Coefficient of `Y1^m` in a covariant of order `m`.
pub fn kappa(f: &Covariant) -> QPoly {
    f.poly.coefficient_of(VarId::Y1, f.order).set_zero(VarId::Y2)
}

/// Reconstructs the covariant `sum_i D2^i(a)/i! Y1^(m-i) Y2^i` from its
/// leading coefficient `a = x_expand(f)`, where `m = ord f`.
pub fn kappa_inv(f: &TFraction, d: FormDegree) -> Result<Covariant> {
    let a = x_expand(f, d)?;
    if !d1(&a, d).is_zero() {
        return Err(Error::Search("leading coefficient is not D1-constant".into()));
    }
    let m = grading_of(f, d)?.order;
    if m < 0 {
        return Err(Error::NilpotencyBound { bound: 0 });
    }
    let m = m as u32;
    let mut out = Vec::new();
    let mut cur = a.to_rational();
    let mut fact = Integer::one();
    for i in 0..=m {
        if i > 0 {
            cur = d2(&cur, d);
            fact *= i;
        }
        let y = Monomial::from_exponents(&[(VarId::Y1, m - i), (VarId::Y2, i)]);
        let inv = Rational::new(Integer::one(), fact.clone());
        out.extend(cur.terms().iter().map(|(mm, c)| (*mm * y, c * &inv)));
    }
    if !d2(&cur, d).is_zero() {
        return Err(Error::NilpotencyBound { bound: m });
    }
    Covariant::new(QPoly::from_terms(out))
}

fn y_derivative(p: &QPoly, e1: u32, e2: u32) -> QPoly {
    let mut q = p.clone();
    for _ in 0..e1 {
        q = q.derivative(VarId::Y1);
    }
    for _ in 0..e2 {
        q = q.derivative(VarId::Y2);
    }
    q
}

/// The classical `r`-th transvectant.
pub fn transvectant(f: &Covariant, g: &Covariant, r: u32) -> Result<Covariant> {
    if r > f.order.min(g.order) {
        return Err(Error::OrderOutOfRange { r, m: f.order as i64, k: g.order as i64 });
    }
    let mut acc = QPoly::zero();
    for i in 0..=r {
        let c = Rational::from_integer(binomial(r as u64, i as u64));
        let c = if i % 2 == 1 { -c } else { c };
        let term = &y_derivative(&f.poly, r - i, i) * &y_derivative(&g.poly, i, r - i);
        acc = &acc + &term.scale(&c);
    }
    Covariant::new(acc)
}

/// Rewrites a semi-invariant in x-coordinates over the z-basis by
/// `x1 -> 0`, `x_j -> z_j / t^(j-1)`; returns the primitive fraction and
/// the rational factor with `p = factor * fraction`.
pub fn z_rewrite(p: &QPoly) -> Result<(TFraction, Rational)> {
    let sigma = |m: &Monomial| -> Option<(Monomial, u32)> {
        let mut out = Monomial::var_pow(VarId::T, m.exponent(VarId::T));
        let mut drop = 0;
        for j in 1..=7 {
            let e = m.exponent(VarId::x(j));
            if e == 0 {
                continue;
            }
            if j == 1 {
                return None;
            }
            out = out * Monomial::var_pow(VarId::z(j), e);
            drop += (j as u32 - 1) * e;
        }
        Some((out, drop))
    };
    let images: Vec<_> = p.terms().iter().filter_map(|(m, c)| sigma(m).map(|im| (im, c))).collect();
    if images.is_empty() {
        return Err(Error::ZeroFraction);
    }
    let s = images.iter().map(|((_, k), _)| *k).max().unwrap();
    let num =
        QPoly::from_terms(images.into_iter().map(|((m, k), c)| (m * Monomial::var_pow(VarId::T, s - k), c.clone())));
    let (int, factor) = num.to_integer_primitive()?;
    Ok((TFraction::new(int, s), factor))
}

/// `D`-powers `D^i(f)` for `i = 0..=depth` in canonical coordinates.
///
/// Level `i` holds the numerator over `t^(s + i)`. With truncation, terms of
/// `x1`-degree above `depth - i` are dropped; `D` lowers the `x1`-degree by
/// at most one, so such terms cannot survive to `x1 = 0` at any level.
#[derive(Clone, Debug)]
pub struct Ladder {
    levels: Vec<ZPoly>,
    s: u32,
    order: i64,
    truncated: bool,
}

impl Ladder {
    pub fn new(f: &TFraction, d: FormDegree, depth: u32, truncate: bool) -> Result<Self> {
        let order = grading_of(f, d)?.order;
        let rule = DerivationRule::canonical(d);
        let mut levels = Vec::with_capacity(depth as usize + 1);
        levels.push(f.num().clone());
        for i in 1..=depth {
            let prev = &levels[i as usize - 1];
            let mut next = rule.apply_raw(prev, f.s() + i - 1);
            if truncate {
                let keep = depth - i;
                next =
                    ZPoly::from_terms(next.into_terms().into_iter().filter(|(m, _)| m.exponent(VarId::x(1)) <= keep));
            }
            levels.push(next);
        }
        Ok(Ladder { levels, s: f.s(), order, truncated: truncate })
    }

    pub fn depth(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn base_exponent(&self) -> u32 {
        self.s
    }

    /// Numerator of `D^i(f)` over `t^(s + i)`.
    pub fn level(&self, i: u32) -> &ZPoly {
        &self.levels[i as usize]
    }
}

#[derive(Clone, Copy, Debug)]
pub struct StOptions {
    /// Form the full sum and assert that every `x1`-term cancels.
    pub check: bool,
}

impl Default for StOptions {
    fn default() -> Self {
        StOptions { check: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Semitransvectant {
    /// Primitive value `[f, g]^r`.
    pub value: TFraction,
    /// `q` with `value = q * kappa((F, G)^r)`; `None` when the sum vanishes.
    pub q: Option<Rational>,
}

/// `[f, g]^r` with the default (checked) options.
pub fn semitransvectant(f: &TFraction, g: &TFraction, r: u32, d: FormDegree) -> Result<TFraction> {
    Ok(semitransvectant_with(f, g, r, d, StOptions::default())?.value)
}

pub fn semitransvectant_with(
    f: &TFraction,
    g: &TFraction,
    r: u32,
    d: FormDegree,
    opts: StOptions,
) -> Result<Semitransvectant> {
    let m = grading_of(f, d)?.order;
    let k = grading_of(g, d)?.order;
    check_range(r, m, k)?;
    let lf = Ladder::new(f, d, r, !opts.check)?;
    let lg = if f == g { lf.clone() } else { Ladder::new(g, d, r, !opts.check)? };
    semitransvectant_ladders(&lf, &lg, r, opts)
}

fn check_range(r: u32, m: i64, k: i64) -> Result<()> {
    if r as i64 > m.min(k) {
        return Err(Error::OrderOutOfRange { r, m, k });
    }
    Ok(())
}

/// Integer weights `w_i` and the scale `L = [m]_r [k]_r` with
/// `kappa((F, G)^r) = sum_i w_i D^i f D^(r-i) g / L`.
pub fn lemma_weights(m: i64, k: i64, r: u32) -> (Vec<Integer>, Integer) {
    let fm = falling_factorial(m, r);
    let fk = falling_factorial(k, r);
    let w = (0..=r)
        .map(|i| {
            let c =
                binomial(r as u64, i as u64) * (&fm / falling_factorial(m, i)) * (&fk / falling_factorial(k, r - i));
            if i % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    (w, fm * fk)
}

/// `[f, g]^r` from precomputed ladders of depth at least `r`.
pub fn semitransvectant_ladders(lf: &Ladder, lg: &Ladder, r: u32, opts: StOptions) -> Result<Semitransvectant> {
    check_range(r, lf.order, lg.order)?;
    assert!(lf.depth() >= r && lg.depth() >= r, "ladder too short");
    if opts.check && (lf.truncated || lg.truncated) {
        return Err(Error::Search("checked semitransvectant needs untruncated ladders".into()));
    }
    let (w, scale) = lemma_weights(lf.order, lg.order, r);
    let x1 = VarId::x(1);
    let summands: Vec<ZPoly> = (0..=r)
        .into_par_iter()
        .filter(|&i| !w[i as usize].is_zero())
        .map(|i| {
            let (a, b) = (lf.level(i), lg.level(r - i));
            let prod = if opts.check { a.mul_par(b) } else { a.set_zero(x1).mul_par(&b.set_zero(x1)) };
            prod.scale(&w[i as usize])
        })
        .collect();
    let sum = summands.into_iter().fold(ZPoly::zero(), |acc, p| &acc + &p);
    if opts.check && sum.contains_var(x1) {
        return Err(Error::Cancellation);
    }
    let raw = TFraction::new(sum, lf.s + lg.s + r);
    let (value, content) = raw.primitive();
    if value.is_zero() {
        return Ok(Semitransvectant { value, q: None });
    }
    Ok(Semitransvectant { value, q: Some(Rational::new(scale, content)) })
}

/// Ladders for many semitransvectants sharing operands.
#[derive(Default)]
pub struct LadderCache {
    ladders: HashMap<String, Ladder>,
}

impl LadderCache {
    pub fn get_or_build(
        &mut self,
        key: &str,
        f: &TFraction,
        d: FormDegree,
        depth: u32,
        truncate: bool,
    ) -> Result<&Ladder> {
        let stale = self
            .ladders
            .get(key)
            .is_none_or(|l| l.depth() < depth || (l.truncated && !truncate) || (l.truncated && l.depth() != depth));
        if stale {
            self.ladders.insert(key.to_string(), Ladder::new(f, d, depth, truncate)?);
        }
        Ok(&self.ladders[key])
    }
}

/// Sign-insensitive proportionality of two fractions.
pub fn proportional(a: &TFraction, b: &TFraction) -> bool {
    let (pa, _) = a.primitive();
    let (pb, _) = b.primitive();
    pa == pb || (pa.is_zero() && pb.is_zero())
}

/// Whether the numerator has coprime integer coefficients and a positive
/// leading coefficient.
pub fn is_normalized(f: &TFraction) -> bool {
    f.is_primitive() && f.num().leading().is_some_and(|(_, c)| c.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::basic_form;

    const D7: FormDegree = FormDegree::SEPTIC;

    fn frac(num: &str, s: u32) -> TFraction {
        TFraction::new(num.parse().unwrap(), s)
    }

    #[test]
    fn kappa_of_basic_form_is_t() {
        assert_eq!(kappa(&basic_form(D7)), "t".parse().unwrap());
        assert_eq!(kappa_inv(&TFraction::t(), D7).unwrap(), basic_form(D7));
    }

    #[test]
    fn small_semitransvectants_of_t() {
        let t = TFraction::t();
        assert_eq!(semitransvectant(&t, &t, 2, D7).unwrap(), frac("z2", 0));
        assert_eq!(semitransvectant(&t, &t, 4, D7).unwrap(), frac("3*z2^2 + z4", 2));
        for r in [1, 3, 5, 7] {
            assert!(semitransvectant(&t, &t, r, D7).unwrap().is_zero());
        }
    }

    #[test]
    fn z2_z3_worked_example() {
        let st = semitransvectant_with(&frac("z2", 0), &frac("z3", 0), 2, D7, StOptions::default()).unwrap();
        assert_eq!(st.value, frac("3*z2^2*z3 - 9*z2*z5 + 7*z3*z4", 2));
        assert_eq!(st.q, Some(Rational::new((-315).into(), 2.into())));
    }

    #[test]
    fn fast_mode_agrees() {
        let t = TFraction::t();
        let z3 = frac("z3", 0);
        for r in 0..=7 {
            let a = semitransvectant_with(&t, &z3, r, D7, StOptions { check: true }).unwrap();
            let b = semitransvectant_with(&t, &z3, r, D7, StOptions { check: false }).unwrap();
            assert_eq!(a, b, "r = {r}");
        }
    }

    #[test]
    fn rejects_r_above_orders() {
        let t = TFraction::t();
        assert!(matches!(semitransvectant(&t, &t, 8, D7), Err(Error::OrderOutOfRange { r: 8, .. })));
    }

    #[test]
    fn z_rewrite_inverts_expansion() {
        let f = frac("3*z2^2*z3 - 9*z2*z5 + 7*z3*z4", 2);
        let x = x_expand(&f, D7).unwrap().to_rational();
        let (g, c) = z_rewrite(&x).unwrap();
        assert_eq!(g, f);
        assert!(c.is_one());
    }
}
