use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use super::monomial::Monomial;
use super::var::VarId;
use super::PolyError;
use crate::scalar::{Coeff, Field};

/// A sparse polynomial: terms sorted by decreasing monomial, no zero
/// coefficients. Two polynomials are equal iff their term lists are equal.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<C> {
    terms: Vec<(Monomial, C)>,
}

impl<C: Coeff> Default for Polynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    pub fn var(v: VarId) -> Self {
        Self::monomial(Monomial::var(v), C::one())
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(C::from_i64(c))
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut acc: FxHashMap<Monomial, C> = FxHashMap::default();
        for (m, c) in terms {
            accumulate(&mut acc, m, c);
        }
        Self::from_map(acc)
    }

    #[allow(clippy::unnecessary_sort_by)]
    pub(crate) fn from_map(acc: FxHashMap<Monomial, C>) -> Self {
        let mut terms: Vec<(Monomial, C)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0)); // descending, without cloning keys
        Polynomial { terms }
    }

    /// Terms already sorted strictly decreasing with nonzero coefficients.
    fn from_sorted_unchecked(terms: Vec<(Monomial, C)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn leading(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.binary_search_by(|(k, _)| m.cmp(k)).map(|i| self.terms[i].1.clone()).unwrap_or_else(|_| C::zero())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(m, a)| (*m, a.mul_ref(c))).filter(|(_, a)| !a.is_zero()).collect();
        Polynomial { terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self::from_sorted_unchecked(self.terms.iter().map(|(k, c)| (*k * *m, c.clone())).collect())
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        let terms =
            self.terms.iter().map(|(k, c)| k.checked_div(m).map(|q| (q, c.clone()))).collect::<Option<Vec<_>>>()?;
        Some(Self::from_sorted_unchecked(terms))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power with a signed exponent; negative exponents are rejected.
    pub fn pow_signed(&self, e: i64) -> Result<Self, PolyError> {
        if e < 0 {
            return Err(PolyError::NegativeExponent(e));
        }
        Ok(self.pow(e as u32))
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: VarId) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            (e > 0).then(|| (m.div_var(v, 1).unwrap(), c.mul_ref(&C::from_i64(e as i64))))
        });
        Self::from_terms(terms)
    }

    /// Simultaneous substitution of the bound variables.
    pub fn substitute(&self, bindings: &HashMap<VarId, Polynomial<C>>) -> Self {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut powers: HashMap<(VarId, u32), Polynomial<C>> = HashMap::new();
        let mut acc: FxHashMap<Monomial, C> = FxHashMap::default();
        // Group terms by their bound part so each product of powers is built once.
        let mut groups: FxHashMap<Monomial, Vec<(Monomial, C)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut free = *m;
            let mut bound = Monomial::ONE;
            for (v, e) in m.factors() {
                if bindings.contains_key(&v) {
                    free = free.div_var(v, e).unwrap();
                    bound = bound * Monomial::var_pow(v, e);
                }
            }
            groups.entry(bound).or_default().push((free, c.clone()));
        }
        for (bound, frees) in groups {
            let mut image = Polynomial::<C>::one();
            for (v, e) in bound.factors() {
                let p = powers.entry((v, e)).or_insert_with(|| bindings[&v].pow(e));
                image = &image * p;
            }
            for (free, c) in frees {
                for (m, a) in &image.terms {
                    accumulate(&mut acc, *m * free, a.mul_ref(&c));
                }
            }
        }
        Self::from_map(acc)
    }

    /// Terms whose exponent of `v` is exactly `e`, with `v` removed.
    pub fn coefficient_of(&self, v: VarId, e: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(v) == e)
            .map(|(m, c)| (m.div_var(v, e).unwrap(), c.clone()))
            .collect();
        Self::from_sorted_unchecked(terms)
    }

    /// Drops every term that contains `v`; the same as substituting `v = 0`.
    pub fn set_zero(&self, v: VarId) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.exponent(v) == 0).cloned().collect();
        Self::from_sorted_unchecked(terms)
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) > 0)
    }

    /// Largest `k` with `v^k` dividing every term.
    pub fn min_exponent(&self, v: VarId) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).min().unwrap_or(0)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let terms = self.terms.iter().map(|(m, c)| (*m, f(c))).filter(|(_, c)| !c.is_zero()).collect();
        Polynomial::from_sorted_unchecked(terms)
    }

    pub fn eval(&self, point: impl Fn(VarId) -> C) -> C {
        let mut vals: [Option<Vec<C>>; super::var::NUM_VARS] = Default::default();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.factors() {
                let slot = vals[v.index()].get_or_insert_with(|| vec![C::one(), point(v)]);
                while slot.len() <= e as usize {
                    let next = slot.last().unwrap().mul_ref(&slot[1]);
                    slot.push(next);
                }
                term *= &slot[e as usize];
            }
            acc += &term;
        }
        acc
    }

    /// Sums `w(v) * exponent` per term; `Some` when all terms agree.
    pub fn homogeneous_degree(&self, w: impl Fn(VarId) -> i64) -> Option<i64> {
        let mut it = self.terms.iter().map(|(m, _)| m.weighted_degree(&w));
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let mut c = a[i].1.clone();
                    if negate {
                        c -= &b[j].1;
                    } else {
                        c += &b[j].1;
                    }
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (*m, if negate { -c.clone() } else { c.clone() })));
        Self::from_sorted_unchecked(out)
    }
}

#[inline]
pub(crate) fn accumulate<C: Coeff>(acc: &mut FxHashMap<Monomial, C>, m: Monomial, c: C) {
    use std::collections::hash_map::Entry;
    match acc.entry(m) {
        Entry::Occupied(mut e) => *e.get_mut() += &c,
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl<C: Field> Polynomial<C> {
    /// Exact multivariate division; fails if `q` does not divide `self`.
    pub fn divide_exact(&self, q: &Self) -> Result<Self, PolyError> {
        let (lm, lc) = q.leading().cloned().ok_or(PolyError::DivisionByZero)?;
        if q.len() == 1 {
            let inv = lc.inv();
            return self.div_monomial(&lm).map(|p| p.scale(&inv)).ok_or(PolyError::NotDivisible);
        }
        let inv = lc.inv();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading().cloned() {
            let qm = m.checked_div(&lm).ok_or(PolyError::NotDivisible)?;
            let qc = c.mul_ref(&inv);
            rem = &rem - &q.mul_monomial(&qm).scale(&qc);
            quot.push((qm, qc));
        }
        Ok(Self::from_terms(quot))
    }
}

impl Polynomial<BigRational> {
    /// Splits `p = c * p'` where `p'` has coprime integer coefficients and a
    /// positive leading coefficient.
    pub fn primitive_normalize(&self) -> Result<(Self, BigRational), PolyError> {
        let (prim, content) = self.to_integer_primitive()?;
        Ok((prim.to_rational(), content))
    }

    /// Same as [`primitive_normalize`](Self::primitive_normalize) with the
    /// primitive part returned over the integers.
    pub fn to_integer_primitive(&self) -> Result<(Polynomial<BigInt>, BigRational), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let den = self.terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let ints = self.map_coeffs(|c| (c * BigRational::from_integer(den.clone())).to_integer());
        let (prim, g) = ints.primitive_part();
        Ok((prim, BigRational::new(g, den)))
    }
}

impl Polynomial<BigInt> {
    /// `p = c * p'` with `p'` primitive and positive leading coefficient.
    /// Zero maps to `(0, 0)`.
    pub fn primitive_part(&self) -> (Self, BigInt) {
        let Some((_, lc)) = self.leading() else {
            return (Self::zero(), BigInt::zero());
        };
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if Signed::is_negative(lc) {
            g = -g;
        }
        if g.is_one() {
            return (self.clone(), g);
        }
        let terms = self.terms.iter().map(|(m, c)| (*m, c / &g)).collect();
        (Self::from_sorted_unchecked(terms), g)
    }

    pub fn to_rational(&self) -> Polynomial<BigRational> {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }

    pub fn reduce_mod<const P: u64>(&self) -> Polynomial<crate::scalar::Fp<P>> {
        self.map_coeffs(crate::scalar::Fp::<P>::from_bigint)
    }

    /// Multiplies two integer polynomials; large products are split across
    /// threads by rows of the left operand.
    pub fn mul_par(&self, other: &Self) -> Self {
        use rayon::prelude::*;
        if self.len().saturating_mul(other.len()) < 200_000 {
            return self * other;
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let chunk = (small.len() / rayon::current_num_threads().max(1)).max(1);
        small
            .terms
            .par_chunks(chunk)
            .map(|part| &Polynomial::from_sorted_unchecked(part.to_vec()) * big)
            .reduce(Polynomial::zero, |a, b| &a + &b)
    }
}

impl Polynomial<BigRational> {
    /// `Some` when every coefficient is an integer.
    pub fn to_integer(&self) -> Option<Polynomial<BigInt>> {
        self.terms.iter().all(|(_, c)| c.is_integer()).then(|| self.map_coeffs(|c| c.to_integer()))
    }
}

impl<C: Coeff> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, o: &Polynomial<C>) -> Polynomial<C> {
        self.merge(o, false)
    }
}

impl<C: Coeff> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, o: &Polynomial<C>) -> Polynomial<C> {
        self.merge(o, true)
    }
}

impl<C: Coeff> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial::from_sorted_unchecked(self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect())
    }
}

impl<C: Coeff> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, o: &Polynomial<C>) -> Polynomial<C> {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        if o.len() == 1 {
            let (m, c) = &o.terms[0];
            return self.mul_monomial(m).scale(c);
        }
        if self.len() == 1 {
            let (m, c) = &self.terms[0];
            return o.mul_monomial(m).scale(c);
        }
        let mut acc: FxHashMap<Monomial, C> =
            FxHashMap::with_capacity_and_hasher(self.len().max(o.len()) * 2, Default::default());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                accumulate(&mut acc, *ma * *mb, ca.mul_ref(cb));
            }
        }
        Polynomial::from_map(acc)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl<C: Coeff> $tr for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $f(self, o: Polynomial<C>) -> Polynomial<C> {
                (&self).$f(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl<C: Coeff> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{QPoly, ZPoly};

    fn q(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    #[test]
    fn additive_cancellation() {
        assert_eq!(&q("t + x1") + &(&QPoly::from_i64(-1) * &q("x1")), q("t"));
    }

    #[test]
    fn z2_from_ring_ops() {
        let z2 = &(&q("x2") * &q("t")) - &q("x1").pow(2);
        assert_eq!(z2, q("x2*t - x1^2"));
        let sq = z2.pow(2);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq, q("x2^2*t^2 - 2*x1^2*x2*t + x1^4"));
    }

    #[test]
    fn negative_power_rejected() {
        assert!(matches!(q("t").pow_signed(-1), Err(PolyError::NegativeExponent(-1))));
        assert_eq!(q("t").pow_signed(0).unwrap(), QPoly::one());
    }

    #[test]
    fn derivatives() {
        assert_eq!(q("t*x1").derivative(VarId::x(1)), q("t"));
        assert_eq!(q("Y1^3*Y2").derivative(VarId::Y1), q("3*Y1^2*Y2"));
        assert_eq!(q("x2*t - x1^2").derivative(VarId::x(1)), q("-2*x1"));
    }

    #[test]
    fn substitution() {
        let mut b = HashMap::new();
        b.insert(VarId::x(1), QPoly::zero());
        assert_eq!(q("x1*z3 + z2^2").substitute(&b), q("z2^2"));

        let mut b = HashMap::new();
        b.insert(VarId::z(2), q("x2*t - x1^2"));
        assert_eq!(q("z2").substitute(&b), q("x2*t - x1^2"));

        let mut b = HashMap::new();
        b.insert(VarId::T, QPoly::one());
        b.insert(VarId::x(1), QPoly::one());
        assert!(q("t^2 - x1").substitute(&b).is_zero());
    }

    #[test]
    fn exact_division() {
        assert_eq!(q("t^2*x2 - t*x1^2").divide_exact(&q("t")).unwrap(), q("t*x2 - x1^2"));
        assert!(matches!(q("t + x1").divide_exact(&q("t")), Err(PolyError::NotDivisible)));
        assert!(matches!(q("t").divide_exact(&QPoly::zero()), Err(PolyError::DivisionByZero)));
        let a = q("x1^2 + 3*t*z2 - 1/2");
        let b = q("z3 - x1*t");
        assert_eq!((&a * &b).divide_exact(&b).unwrap(), a);
    }

    #[test]
    fn primitive_normalization() {
        let (p, c) = q("-2/315*(3*z2^2*z3 - 9*z2*z5 + 7*z3*z4)").primitive_normalize().unwrap();
        assert_eq!(p, q("3*z2^2*z3 - 9*z2*z5 + 7*z3*z4"));
        assert_eq!(c, BigRational::new((-2).into(), 315.into()));

        let (p, c) = q("6*x1 + 4*t").primitive_normalize().unwrap();
        assert_eq!(p, q("3*x1 + 2*t"));
        assert_eq!(c, BigRational::from_integer(2.into()));

        let (p, c) = q("-z2").primitive_normalize().unwrap();
        assert_eq!(p, q("z2"));
        assert_eq!(c, BigRational::from_integer((-1).into()));

        assert!(matches!(QPoly::zero().primitive_normalize(), Err(PolyError::ZeroPolynomial)));
    }

    #[test]
    fn integer_primitive_part() {
        // z3 is the larger variable, so it leads.
        let p: ZPoly = "6*z2 - 4*z3".parse().unwrap();
        let (prim, g) = p.primitive_part();
        assert_eq!(prim, "2*z3 - 3*z2".parse().unwrap());
        assert_eq!(g, BigInt::from(-2));
    }

    #[test]
    fn evaluation() {
        let p = q("x2*t - x1^2");
        let v = p.eval(|v| match v {
            VarId::T => BigRational::from_integer(3.into()),
            _ => BigRational::from_integer(v.index().into()),
        });
        assert_eq!(v, BigRational::from_integer(5.into()));
    }
}
