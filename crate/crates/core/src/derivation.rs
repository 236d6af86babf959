//! The derivations `D1`, `D2` on x-coordinates and their extension `D` to
//! fractions over the z-basis.
//!
//! Writing `tD` for `t` times the extension, the rules for a form of degree
//! `d` are
//!
//! ```text
//! tD(t)   = d x1 t
//! tD(x_j) = (d - j) x_{j+1} t
//! tD(z_i) = (d - i) z_{i+1} + i (d - 2) x1 z_i - i (d - 1) z2 z_{i-1}
//! ```
//!
//! with `z1 = z_{d+1} = 0`. In the canonical coordinates `(t, x1, z2..zd)` the
//! rule for `x1` is replaced by `tD(x1) = (d - 1)(z2 + x1^2)`, which keeps the
//! ring closed and the representation unique.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::fraction::TFraction;
use crate::grading::{x_expand, FormDegree};
use crate::poly::{accumulate, Monomial, VarId, NUM_VARS};
use crate::scalar::Coeff;
use crate::{Polynomial, ZPoly};

const PAR_THRESHOLD: usize = 4096;

/// Applies the derivation sending each variable `v` to `images[v]`
/// (absent entries map to zero).
pub fn derive<C: Coeff>(p: &Polynomial<C>, images: &[Option<Polynomial<C>>; NUM_VARS]) -> Polynomial<C> {
    let chunk = |terms: &[(Monomial, C)]| {
        let mut acc: FxHashMap<Monomial, C> = FxHashMap::default();
        for (m, c) in terms {
            for (v, e) in m.factors() {
                let Some(img) = &images[v.index()] else { continue };
                let base = m.div_var(v, 1).unwrap();
                let k = c.mul_ref(&C::from_i64(e as i64));
                for (im, ic) in img.terms() {
                    accumulate(&mut acc, base * *im, k.mul_ref(ic));
                }
            }
        }
        Polynomial::from_map(acc)
    };
    if p.len() < PAR_THRESHOLD {
        return chunk(p.terms());
    }
    let size = (p.len() / rayon::current_num_threads().max(1)).max(256);
    p.terms().par_chunks(size).map(chunk).reduce(Polynomial::zero, |a, b| &a + &b)
}

fn term<C: Coeff>(c: i64, exps: &[(VarId, u32)]) -> Polynomial<C> {
    Polynomial::monomial(Monomial::from_exponents(exps), C::from_i64(c))
}

fn empty_images<C: Coeff>() -> [Option<Polynomial<C>>; NUM_VARS] {
    std::array::from_fn(|_| None)
}

fn coefficient_var(i: usize) -> VarId {
    if i == 0 {
        VarId::T
    } else {
        VarId::x(i)
    }
}

/// `D1 = t d/dx1 + 2 x1 d/dx2 + ... + d x_{d-1} d/dxd`.
pub fn d1<C: Coeff>(p: &Polynomial<C>, d: FormDegree) -> Polynomial<C> {
    let mut images = empty_images::<C>();
    for i in 1..=d.get() as usize {
        images[VarId::x(i).index()] = Some(term(i as i64, &[(coefficient_var(i - 1), 1)]));
    }
    derive(p, &images)
}

/// `D2 = d x1 d/dt + (d-1) x2 d/dx1 + ... + xd d/dx_{d-1}`.
pub fn d2<C: Coeff>(p: &Polynomial<C>, d: FormDegree) -> Polynomial<C> {
    let dd = d.get() as usize;
    let mut images = empty_images::<C>();
    for i in 0..dd {
        images[coefficient_var(i).index()] = Some(term((dd - i) as i64, &[(VarId::x(i + 1), 1)]));
    }
    derive(p, &images)
}

/// A derivation given by `t^den D(v)` for every variable `v`.
#[derive(Clone, Debug)]
pub struct DerivationRule {
    d: FormDegree,
    den: u32,
    images: [Option<ZPoly>; NUM_VARS],
}

impl DerivationRule {
    pub fn d1(d: FormDegree) -> Self {
        let mut images = empty_images();
        for i in 1..=d.get() as usize {
            images[VarId::x(i).index()] = Some(term(i as i64, &[(coefficient_var(i - 1), 1)]));
        }
        DerivationRule { d, den: 0, images }
    }

    pub fn d2(d: FormDegree) -> Self {
        let dd = d.get() as usize;
        let mut images = empty_images();
        for i in 0..dd {
            images[coefficient_var(i).index()] = Some(term((dd - i) as i64, &[(VarId::x(i + 1), 1)]));
        }
        DerivationRule { d, den: 0, images }
    }

    /// `D` on the mixed ring `Q[t, x1..xd, z2..zd][1/t]`; x-variables follow `D2`.
    pub fn mixed(d: FormDegree) -> Self {
        let dd = d.get() as usize;
        let mut images = Self::z_rules(d);
        images[VarId::T.index()] = Some(term(dd as i64, &[(VarId::x(1), 1), (VarId::T, 1)]));
        for j in 1..dd {
            images[VarId::x(j).index()] = Some(term((dd - j) as i64, &[(VarId::x(j + 1), 1), (VarId::T, 1)]));
        }
        DerivationRule { d, den: 1, images }
    }

    /// `D` on `Q[t, x1, z2..zd][1/t]`.
    pub fn canonical(d: FormDegree) -> Self {
        let dd = d.get() as i64;
        let mut images = Self::z_rules(d);
        images[VarId::T.index()] = Some(term(dd, &[(VarId::x(1), 1), (VarId::T, 1)]));
        images[VarId::x(1).index()] = Some(&term(dd - 1, &[(VarId::z(2), 1)]) + &term(dd - 1, &[(VarId::x(1), 2)]));
        DerivationRule { d, den: 1, images }
    }

    fn z_rules(d: FormDegree) -> [Option<ZPoly>; NUM_VARS] {
        let dd = d.get() as usize;
        let mut images = empty_images();
        for i in 2..=dd {
            let ii = i as i64;
            let mut img = term(ii * (dd as i64 - 2), &[(VarId::x(1), 1), (VarId::z(i), 1)]);
            if i < dd {
                img = &img + &term((dd - i) as i64, &[(VarId::z(i + 1), 1)]);
            }
            if i > 2 {
                img = &img - &term(ii * (dd as i64 - 1), &[(VarId::z(2), 1), (VarId::z(i - 1), 1)]);
            }
            images[VarId::z(i).index()] = Some(img);
        }
        images
    }

    pub fn form_degree(&self) -> FormDegree {
        self.d
    }

    /// `D(v)` as a fraction.
    pub fn image(&self, v: VarId) -> TFraction {
        match &self.images[v.index()] {
            Some(p) => TFraction::new(p.clone(), self.den),
            None => TFraction::zero(),
        }
    }

    /// Numerator of `D(num / t^s)` over `t^(s + 1)`, without cancelling `t`.
    pub fn apply_raw(&self, num: &ZPoly, s: u32) -> ZPoly {
        // D(N / t^s) = (t^(1-den) . t^den D(N) - s N D(t)) / t^(s+1)
        let lift = Monomial::var_pow(VarId::T, 1 - self.den);
        let dn = derive(num, &self.images).mul_monomial(&lift);
        if s == 0 {
            return dn;
        }
        let dt = match &self.images[VarId::T.index()] {
            Some(p) => p.div_monomial(&Monomial::var_pow(VarId::T, self.den)).expect("D(t) is a polynomial"),
            None => return dn,
        };
        let corr = num.mul_par(&dt).scale(&(s as i64).into());
        &dn - &corr
    }

    pub fn apply(&self, f: &TFraction) -> TFraction {
        TFraction::new(self.apply_raw(f.num(), f.s()), f.s() + 1)
    }

    pub fn apply_poly(&self, p: &ZPoly) -> TFraction {
        self.apply(&TFraction::from_poly(p.clone()))
    }
}

/// The extension `D` of `D2` applied to a fraction over the mixed ring.
pub fn dz(f: &TFraction, d: FormDegree) -> TFraction {
    DerivationRule::mixed(d).apply(f)
}

/// Largest `s` with `D2^s(f) != 0`, computed on the x-expansion.
pub fn nilpotency_order(f: &TFraction, d: FormDegree) -> Result<u32> {
    nilpotency_order_poly(&x_expand(f, d)?, d)
}

/// As [`nilpotency_order`], for a polynomial already in x-coordinates.
pub fn nilpotency_order_poly(p: &ZPoly, d: FormDegree) -> Result<u32> {
    if p.is_zero() {
        return Err(Error::ZeroFraction);
    }
    let degree = p.terms()[0].0.total_degree();
    let bound = d.get() * degree;
    let mut q = p.clone();
    for s in 0..=bound {
        q = d2(&q, d);
        if q.is_zero() {
            return Ok(s);
        }
    }
    Err(Error::NilpotencyBound { bound })
}

/// Nilpotency order through repeated `D` in canonical coordinates.
pub fn nilpotency_order_z(f: &TFraction, d: FormDegree) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroFraction);
    }
    let g = crate::grading::grading_of(f, d)?;
    let bound = (d.as_i64() * g.degree).max(0) as u32;
    let rule = DerivationRule::canonical(d);
    let mut q = f.clone();
    for s in 0..=bound {
        q = rule.apply(&q);
        if q.is_zero() {
            return Ok(s);
        }
    }
    Err(Error::NilpotencyBound { bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::z_poly;

    const D7: FormDegree = FormDegree::SEPTIC;

    fn zp(s: &str) -> ZPoly {
        s.parse().unwrap()
    }

    #[test]
    fn d1_kills_z2_and_d2_matches_hand_computation() {
        assert!(d1(&z_poly(2), D7).is_zero());
        assert_eq!(d2(&z_poly(2), D7), zp("5*x3*t - 5*x1*x2"));
        assert_eq!(d2(&zp("t"), D7), zp("7*x1"));
        assert!(d2(&zp("x7"), D7).is_zero());
        assert_eq!(d1(&zp("x1"), D7), zp("t"));
    }

    #[test]
    fn dz_on_t_and_z2() {
        assert_eq!(dz(&TFraction::t(), D7), TFraction::from_poly(zp("7*x1")));
        assert_eq!(dz(&TFraction::from_poly(zp("z2")), D7), TFraction::new(zp("10*x1*z2 + 5*z3"), 1));
    }

    #[test]
    fn printed_septic_operator() {
        let rule = DerivationRule::mixed(D7);
        let expect = [
            (2, "5*(2*x1*z2 + z3)"),
            (3, "15*x1*z3 - 18*z2^2 + 4*z4"),
            (4, "20*x1*z4 - 24*z2*z3 + 3*z5"),
            (5, "2*z6 + 25*x1*z5 - 30*z2*z4"),
            (6, "z7 + 30*x1*z6 - 36*z2*z5"),
            (7, "7*(5*x1*z7 - 6*z2*z6)"),
        ];
        for (i, num) in expect {
            assert_eq!(rule.image(VarId::z(i)), TFraction::new(zp(num), 1), "z{i}");
        }
    }

    #[test]
    fn orders_by_both_routes() {
        for (src, ord) in [("t", 7), ("z2", 10), ("z3", 15)] {
            let f = TFraction::from_poly(zp(src));
            assert_eq!(nilpotency_order(&f, D7).unwrap(), ord);
            assert_eq!(nilpotency_order_z(&f, D7).unwrap(), ord);
        }
    }
}
