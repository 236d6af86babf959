//! Exact sparse multivariate polynomials over the fixed variable set
//! `{t, x1..x7, z2..z7, Y1, Y2}`.

mod monomial;
mod polynomial;
pub mod text;
mod var;

pub use monomial::Monomial;
pub(crate) use polynomial::accumulate;
pub use polynomial::Polynomial;
pub use text::{parse, render, render_lines};
pub use var::{VarId, NUM_VARS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("zero polynomial has no primitive part")]
    ZeroPolynomial,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}
