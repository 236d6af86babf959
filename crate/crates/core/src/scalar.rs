//! Coefficient rings.
//!
//! Polynomials and matrices are generic over [`Coeff`]; exact work uses
//! [`Integer`](crate::Integer) and [`Rational`](crate::Rational), and the
//! evaluation screen uses the prime field [`Fp`].

use std::fmt::{self, Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative coefficient ring.
pub trait Coeff:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Builds the ring element `num/den`, if it exists in this ring.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self>;

    /// Sign used when printing; rings without an order report `false`.
    fn is_negative(&self) -> bool;

    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out *= other;
        out
    }
}

/// A coefficient ring in which every nonzero element is invertible.
pub trait Field: Coeff + for<'a> DivAssign<&'a Self> {
    fn inv(&self) -> Self;
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (q, r) = num_integer::Integer::div_rem(num, den);
        r.is_zero().then_some(q)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

impl Coeff for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        (!den.is_zero()).then(|| BigRational::new(num.clone(), den.clone()))
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

impl Field for BigRational {
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// The 62-bit prime `2^62 - 57` used by the evaluation screen.
pub const SCREEN_PRIME: u64 = 4_611_686_018_427_387_847;

/// Element of the prime field `Z/PZ`; `P` must be an odd prime below `2^63`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

/// The screening field.
pub type Fp62 = Fp<SCREEN_PRIME>;

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        let m = BigInt::from(P);
        let mut r = v % &m;
        if Signed::is_negative(&r) {
            r += &m;
        }
        Fp(r.to_u64().expect("residue fits in u64"))
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            base = Fp(mulmod(base.0, base.0, P));
            e >>= 1;
        }
        acc
    }
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> std::ops::Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> std::ops::Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(mulmod(self.0, o.0, P))
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1)
    }
}

impl<const P: u64> AddAssign<&Fp<P>> for Fp<P> {
    fn add_assign(&mut self, o: &Self) {
        *self = *self + *o;
    }
}

impl<const P: u64> SubAssign<&Fp<P>> for Fp<P> {
    fn sub_assign(&mut self, o: &Self) {
        *self = *self + (-*o);
    }
}

impl<const P: u64> MulAssign<&Fp<P>> for Fp<P> {
    fn mul_assign(&mut self, o: &Self) {
        *self = *self * *o;
    }
}

impl<const P: u64> DivAssign<&Fp<P>> for Fp<P> {
    #[allow(clippy::suspicious_op_assign_impl)]
    fn div_assign(&mut self, o: &Self) {
        *self = *self * o.inv();
    }
}

impl<const P: u64> Coeff for Fp<P> {
    fn from_i64(v: i64) -> Self {
        let r = v.rem_euclid(P as i64);
        Fp(r as u64)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        let d = Self::from_bigint(den);
        (!d.is_zero()).then(|| Self::from_bigint(num) * d.inv())
    }

    fn is_negative(&self) -> bool {
        false
    }
}

impl<const P: u64> Field for Fp<P> {
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero in Fp");
        self.pow(P - 2)
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Falling factorial `a (a-1) ... (a-i+1)`.
pub fn falling_factorial(a: i64, i: u32) -> BigInt {
    (0..i as i64).fold(BigInt::one(), |acc, j| acc * BigInt::from(a - j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_inverse_round_trips() {
        for v in [1u64, 2, 3, 12345, SCREEN_PRIME - 1] {
            let x = Fp62::new(v);
            assert_eq!(x * x.inv(), Fp62::one());
        }
    }

    #[test]
    fn negative_integers_reduce_into_range() {
        assert_eq!(Fp62::from_i64(-1), -Fp62::one());
        assert_eq!(Fp62::from_bigint(&BigInt::from(-5)), Fp62::from_i64(-5));
    }

    #[test]
    fn binomials_and_falling_factorials() {
        assert_eq!(binomial(7, 3), BigInt::from(35));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(falling_factorial(10, 2), BigInt::from(90));
        assert_eq!(falling_factorial(15, 0), BigInt::one());
    }

    #[test]
    fn ratio_into_integers_requires_divisibility() {
        assert_eq!(BigInt::from_ratio(&BigInt::from(6), &BigInt::from(3)), Some(BigInt::from(2)));
        assert_eq!(BigInt::from_ratio(&BigInt::from(5), &BigInt::from(3)), None);
    }
}
