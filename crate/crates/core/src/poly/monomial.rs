use std::cmp::Ordering;
use std::fmt;

use super::var::{VarId, NUM_VARS};

const HIGH_BITS: u128 = 0x8080_8080_8080_8080_8080_8080_8080_8080;

/// A power product of the sixteen ring variables.
///
/// Exponents are packed one byte per variable with `t` in the lowest byte, so
/// comparing the packed words compares `Y2` first. Together with the total
/// degree this gives graded lex order with `Y2` the largest variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    deg: u16,
    bits: u128,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { deg: 0, bits: 0 };

    pub fn var(v: VarId) -> Monomial {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: VarId, e: u32) -> Monomial {
        assert!(e <= 255, "exponent {e} exceeds the packed range");
        Monomial { deg: e as u16, bits: (e as u128) << (8 * v.index()) }
    }

    pub fn from_exponents(exps: &[(VarId, u32)]) -> Monomial {
        exps.iter().fold(Monomial::ONE, |m, &(v, e)| m * Monomial::var_pow(v, e))
    }

    #[inline]
    pub fn exponent(&self, v: VarId) -> u32 {
        ((self.bits >> (8 * v.index())) & 0xff) as u32
    }

    pub fn total_degree(&self) -> u32 {
        self.deg as u32
    }

    pub fn is_one(&self) -> bool {
        self.bits == 0
    }

    /// Nonzero exponents in increasing variable order.
    pub fn factors(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        (0..NUM_VARS).filter_map(move |i| {
            let v = VarId::from_index(i);
            let e = self.exponent(v);
            (e > 0).then_some((v, e))
        })
    }

    /// Removes `v^e`; `None` if the exponent of `v` is below `e`.
    pub fn div_var(&self, v: VarId, e: u32) -> Option<Monomial> {
        (self.exponent(v) >= e)
            .then(|| Monomial { deg: self.deg - e as u16, bits: self.bits - ((e as u128) << (8 * v.index())) })
    }

    pub fn without(&self, v: VarId) -> Monomial {
        self.div_var(v, self.exponent(v)).expect("exponent present")
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..NUM_VARS).all(|i| {
            let v = VarId::from_index(i);
            self.exponent(v) <= other.exponent(v)
        })
    }

    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| Monomial { deg: self.deg - other.deg, bits: self.bits - other.bits })
    }

    pub fn pow(&self, e: u32) -> Monomial {
        (0..e).fold(Monomial::ONE, |acc, _| acc * *self)
    }

    /// Sum of `w(v) * exponent(v)` over all variables.
    pub fn weighted_degree(&self, w: impl Fn(VarId) -> i64) -> i64 {
        self.factors().map(|(v, e)| w(v) * e as i64).sum()
    }
}

impl std::ops::Mul for Monomial {
    type Output = Monomial;

    #[inline]
    fn mul(self, o: Monomial) -> Monomial {
        if (self.bits | o.bits) & HIGH_BITS != 0 {
            for v in VarId::all() {
                assert!(self.exponent(v) + o.exponent(v) <= 255, "exponent of {v} exceeds the packed range");
            }
        }
        Monomial { deg: self.deg + o.deg, bits: self.bits + o.bits }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.factors() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}
