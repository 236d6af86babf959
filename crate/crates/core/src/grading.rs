//! Cayley's z-basis, gradings, and the coefficient action of SL2.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::covariant::Covariant;
use crate::error::{Error, Result};
use crate::fraction::TFraction;
use crate::poly::{Monomial, VarId};
use crate::scalar::binomial;
use crate::{QPoly, Rational, ZPoly};

/// Degree of the binary form, `2 <= d <= 7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormDegree(u32);

impl FormDegree {
    pub const SEPTIC: FormDegree = FormDegree(7);

    pub fn new(d: u32) -> Result<Self> {
        if (2..=7).contains(&d) {
            Ok(FormDegree(d))
        } else {
            Err(Error::FormDegree(d))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }
}

impl fmt::Display for FormDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `(degree, weight)` of a single variable.
pub fn var_grading(v: VarId) -> (i64, i64) {
    if v == VarId::T {
        (1, 0)
    } else if let Some(i) = v.x_index() {
        (1, i as i64)
    } else if let Some(i) = v.z_index() {
        (i as i64, i as i64)
    } else {
        (0, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grading {
    pub degree: i64,
    pub weight: i64,
    pub order: i64,
}

impl Grading {
    pub fn new(degree: i64, weight: i64, d: FormDegree) -> Self {
        Grading { degree, weight, order: d.as_i64() * degree - 2 * weight }
    }

    pub fn is_invariant(&self) -> bool {
        self.order == 0
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg {} wt {} ord {}", self.degree, self.weight, self.order)
    }
}

/// `z_i` as a polynomial in `t, x1, ..., xi`.
pub fn z_poly(i: usize) -> ZPoly {
    assert!((2..=7).contains(&i), "z index {i} out of range");
    let mut terms = Vec::with_capacity(i);
    for k in 0..=i - 2 {
        let mut c = binomial(i as u64, k as u64);
        if k % 2 == 1 {
            c = -c;
        }
        let m =
            Monomial::from_exponents(&[(VarId::x(i - k), 1), (VarId::x(1), k as u32), (VarId::T, (i - k - 1) as u32)]);
        terms.push((m, c));
    }
    let sign = if i.is_multiple_of(2) { -1 } else { 1 };
    terms.push((Monomial::var_pow(VarId::x(1), i as u32), BigInt::from(sign * (i as i64 - 1))));
    ZPoly::from_terms(terms)
}

/// `z_2, ..., z_d` in x-coordinates.
pub fn z_basis(d: FormDegree) -> Vec<ZPoly> {
    (2..=d.get() as usize).map(z_poly).collect()
}

fn z_bindings(num: &ZPoly) -> HashMap<VarId, ZPoly> {
    (2..=7).map(VarId::z).filter(|v| num.contains_var(*v)).map(|v| (v, z_poly(v.z_index().unwrap()))).collect()
}

/// Rewrites `f` in x-coordinates and divides out `t^s` exactly.
pub fn x_expand(f: &TFraction, d: FormDegree) -> Result<ZPoly> {
    check_z_range(f.num(), d)?;
    let expanded = f.num().substitute(&z_bindings(f.num()));
    expanded.div_monomial(&Monomial::var_pow(VarId::T, f.s())).ok_or(Error::NotDivisible { s: f.s() })
}

fn check_z_range(p: &ZPoly, d: FormDegree) -> Result<()> {
    let dd = d.get() as usize;
    for v in VarId::all() {
        let out = v.x_index().is_some_and(|i| i > dd) || v.z_index().is_some_and(|i| i > dd);
        if out && p.contains_var(v) {
            return Err(Error::Search(format!("variable {v} not defined for d = {d}")));
        }
    }
    Ok(())
}

/// Grading of `num / t^s`; the numerator must be bihomogeneous.
pub fn grading_of(f: &TFraction, d: FormDegree) -> Result<Grading> {
    let (deg, wt) = bigrading(f.num())?;
    Ok(Grading::new(deg - f.s() as i64, wt, d))
}

/// `(degree, weight)` shared by every term of `p`.
pub fn bigrading(p: &ZPoly) -> Result<(i64, i64)> {
    let mut it = p.terms().iter().map(|(m, _)| {
        m.factors().fold((0, 0), |(a, b), (v, e)| {
            let (dv, wv) = var_grading(v);
            (a + dv * e as i64, b + wv * e as i64)
        })
    });
    let first = it.next().ok_or(Error::ZeroFraction)?;
    if it.all(|g| g == first) {
        Ok(first)
    } else {
        Err(Error::Inhomogeneous)
    }
}

/// `t Y1^d + sum_i C(d,i) x_i Y1^(d-i) Y2^i`.
pub fn basic_form(d: FormDegree) -> Covariant {
    let dd = d.get();
    let terms = (0..=dd).map(|i| {
        let coeff_var = if i == 0 { VarId::T } else { VarId::x(i as usize) };
        let m = Monomial::from_exponents(&[(coeff_var, 1), (VarId::Y1, dd - i), (VarId::Y2, i)]);
        (m, Rational::from_integer(binomial(dd as u64, i as u64)))
    });
    Covariant::new(QPoly::from_terms(terms)).expect("basic form is Y-homogeneous")
}

/// A unimodular matrix acting by `Y1 -> a Y1 + b Y2`, `Y2 -> c Y1 + e Y2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub e: Rational,
}

impl Sl2 {
    pub fn new(a: Rational, b: Rational, c: Rational, e: Rational) -> Result<Self> {
        let det = &a * &e - &b * &c;
        if !det.is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(Sl2 { a, b, c, e })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, e: i64) -> Result<Self> {
        let q = |v: i64| Rational::from_integer(v.into());
        Self::new(q(a), q(b), q(c), q(e))
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1).unwrap()
    }
}

/// Images of `t, x1, ..., xd` under the coefficient action of `m`.
pub fn sl2_images(m: &Sl2, d: FormDegree) -> Vec<QPoly> {
    let form = basic_form(d);
    let lin = |p: &Rational, q: &Rational| {
        QPoly::from_terms([(Monomial::var(VarId::Y1), p.clone()), (Monomial::var(VarId::Y2), q.clone())])
    };
    let bindings = HashMap::from([(VarId::Y1, lin(&m.a, &m.b)), (VarId::Y2, lin(&m.c, &m.e))]);
    let moved = form.poly().substitute(&bindings);
    let dd = d.get();
    (0..=dd)
        .map(|i| {
            let y = Monomial::from_exponents(&[(VarId::Y1, dd - i), (VarId::Y2, i)]);
            let c = coefficient_of_y(&moved, &y);
            let scale = Rational::from_integer(binomial(dd as u64, i as u64)).recip();
            c.scale(&scale)
        })
        .collect()
}

/// The polynomial coefficient of the pure Y-monomial `y` in `p`.
pub fn coefficient_of_y(p: &QPoly, y: &Monomial) -> QPoly {
    QPoly::from_terms(p.terms().iter().filter_map(|(m, c)| {
        let ypart = Monomial::from_exponents(&[(VarId::Y1, m.exponent(VarId::Y1)), (VarId::Y2, m.exponent(VarId::Y2))]);
        (ypart == *y).then(|| (m.without(VarId::Y1).without(VarId::Y2), c.clone()))
    }))
}

/// Substitutes the transformed coefficients into an x-coordinate polynomial.
pub fn sl2_substitute(p: &QPoly, m: &Sl2, d: FormDegree) -> QPoly {
    let images = sl2_images(m, d);
    let bindings =
        images.into_iter().enumerate().map(|(i, img)| (if i == 0 { VarId::T } else { VarId::x(i) }, img)).collect();
    p.substitute(&bindings)
}

/// Transformed coefficient values `(t', x1', ..., xd')` at a numeric point.
pub fn sl2_act_on_point(m: &Sl2, d: FormDegree, point: &[Rational]) -> Vec<Rational> {
    assert_eq!(point.len(), d.get() as usize + 1);
    sl2_images(m, d).iter().map(|img| img.eval(|v| coefficient_value(point, v))).collect()
}

fn coefficient_value(point: &[Rational], v: VarId) -> Rational {
    if v == VarId::T {
        point[0].clone()
    } else if let Some(i) = v.x_index() {
        point.get(i).cloned().unwrap_or_else(Rational::zero)
    } else {
        Rational::zero()
    }
}

/// Value of `num / t^s` at the x-point `(t, x1, ..., xd)` with `t != 0`.
pub fn eval_at_x_point(f: &TFraction, point: &[Rational]) -> Rational {
    let t = &point[0];
    assert!(!t.is_zero(), "evaluation needs t != 0");
    let zvals: Vec<Rational> = (0..=7)
        .map(|i| {
            if (2..point.len()).contains(&i) {
                z_poly(i).to_rational().eval(|v| coefficient_value(point, v))
            } else {
                Rational::zero()
            }
        })
        .collect();
    let num = f.num().to_rational().eval(|v| {
        if let Some(i) = v.z_index() {
            zvals[i].clone()
        } else {
            coefficient_value(point, v)
        }
    });
    num / num_traits::pow(t.clone(), f.s() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_is_printed_form() {
        assert_eq!(z_poly(2), "x2*t - x1^2".parse().unwrap());
    }

    #[test]
    fn gradings_of_small_objects() {
        let d = FormDegree::SEPTIC;
        let g = grading_of(&TFraction::t(), d).unwrap();
        assert_eq!((g.degree, g.weight, g.order), (1, 0, 7));
        let z3 = TFraction::from_poly("z3".parse().unwrap());
        assert_eq!(grading_of(&z3, d).unwrap().order, 15);
        let mixed = TFraction::from_poly("z3 + z2".parse().unwrap());
        assert!(matches!(grading_of(&mixed, d), Err(Error::Inhomogeneous)));
    }

    #[test]
    fn rejects_bad_form_degree() {
        assert!(FormDegree::new(8).is_err());
        assert!(FormDegree::new(1).is_err());
    }

    #[test]
    fn sl2_rejects_non_unimodular() {
        assert!(matches!(Sl2::from_i64(2, 0, 0, 1), Err(Error::NotUnimodular(_))));
    }
}
