use std::fmt;

use num_traits::{One, Zero};

use crate::poly::{Monomial, VarId};
use crate::{Integer, ZPoly};

/// `num / t^s` with integer numerator; `s == 0` or `t` does not divide `num`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct TFraction {
    num: ZPoly,
    s: u32,
}

impl TFraction {
    /// Builds `num / t^s`, cancelling common powers of `t`.
    pub fn new(num: ZPoly, s: u32) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let k = num.min_exponent(VarId::T).min(s);
        if k == 0 {
            return TFraction { num, s };
        }
        let num = num.div_monomial(&Monomial::var_pow(VarId::T, k)).expect("t^k divides every term");
        TFraction { num, s: s - k }
    }

    pub fn zero() -> Self {
        TFraction { num: ZPoly::zero(), s: 0 }
    }

    pub fn one() -> Self {
        Self::from_poly(ZPoly::one())
    }

    pub fn t() -> Self {
        Self::from_poly(ZPoly::var(VarId::T))
    }

    pub fn from_poly(p: ZPoly) -> Self {
        Self::new(p, 0)
    }

    pub fn num(&self) -> &ZPoly {
        &self.num
    }

    /// Exponent of the `t` denominator.
    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul_par(&other.num), self.s + other.s)
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::new(self.num.pow(e), self.s * e)
    }

    pub fn scale(&self, c: &Integer) -> Self {
        Self::new(self.num.scale(c), self.s)
    }

    /// Numerator over the common denominator `t^s` with `s >= self.s()`.
    pub fn num_over(&self, s: u32) -> ZPoly {
        assert!(s >= self.s);
        self.num.mul_monomial(&Monomial::var_pow(VarId::T, s - self.s))
    }

    pub fn add(&self, other: &Self) -> Self {
        let s = self.s.max(other.s);
        Self::new(&self.num_over(s) + &other.num_over(s), s)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let s = self.s.max(other.s);
        Self::new(&self.num_over(s) - &other.num_over(s), s)
    }

    /// Splits off the integer content so the numerator is primitive with a
    /// positive leading coefficient.
    pub fn primitive(&self) -> (Self, Integer) {
        if self.is_zero() {
            return (Self::zero(), Integer::zero());
        }
        let (num, c) = self.num.primitive_part();
        (TFraction { num, s: self.s }, c)
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.num.primitive_part().1.is_one()
    }
}

impl fmt::Display for TFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.s, self.num.len()) {
            (0, _) => write!(f, "{}", self.num),
            (1, 1) => write!(f, "{}/t", self.num),
            (1, _) => write!(f, "({})/t", self.num),
            (s, 1) => write!(f, "{}/t^{s}", self.num),
            (s, _) => write!(f, "({})/t^{s}", self.num),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(s: &str) -> ZPoly {
        s.parse().unwrap()
    }

    #[test]
    fn cancels_common_t_powers() {
        let f = TFraction::new(z("t^3*z2 + t^2*z4"), 4);
        assert_eq!(f.s(), 2);
        assert_eq!(f.num(), &z("t*z2 + z4"));
        let g = TFraction::new(z("t^3"), 1);
        assert_eq!(g, TFraction::from_poly(z("t^2")));
    }

    #[test]
    fn products_add_exponents() {
        let dv1 = TFraction::new(z("3*z2^2 + z4"), 2);
        let sq = dv1.pow(2);
        assert_eq!(sq.s(), 4);
        assert_eq!(TFraction::t().mul(&dv1).s(), 1);
    }

    #[test]
    fn primitive_splits_content() {
        let f = TFraction::new(z("-4*z2^2 + 6*z4"), 2);
        let (p, c) = f.primitive();
        assert_eq!(c, Integer::from(-2));
        assert_eq!(p.num(), &z("2*z2^2 - 3*z4"));
    }

    #[test]
    fn display() {
        assert_eq!(TFraction::new(z("3*z2^2 + z4"), 2).to_string(), "(3*z2^2 + z4)/t^2");
        assert_eq!(TFraction::t().to_string(), "t");
    }
}
