//! Exact computation of semi-invariants and invariants of binary forms.
//!
//! Semi-invariants are carried as fractions `f(t, z2, ..., zd) / t^s` over
//! Cayley's semi-invariants `z_i`, and new ones are produced by
//! semitransvectants computed directly on that representation.

pub mod covariant;
pub mod derivation;
pub mod dimension;
pub mod error;
pub mod fraction;
pub mod grading;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod search;
pub mod verify;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use covariant::{semitransvectant, Covariant};
pub use error::{Error, Result};
pub use fraction::TFraction;
pub use grading::{FormDegree, Grading};
pub use poly::{Monomial, PolyError, Polynomial, VarId};
pub use scalar::{Coeff, Field, Fp, Fp62};

/// Arbitrary-precision integer.
pub type Integer = BigInt;
/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = BigRational;
/// Polynomial with rational coefficients.
pub type QPoly = Polynomial<Rational>;
/// Polynomial with integer coefficients.
pub type ZPoly = Polynomial<Integer>;
/// Polynomial over the screening prime field.
pub type ModPoly = Polynomial<Fp62>;
