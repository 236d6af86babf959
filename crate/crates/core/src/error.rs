use crate::poly::PolyError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),

    #[error("form degree {0} outside the supported range 2..=7")]
    FormDegree(u32),

    #[error("t^{s} does not divide the x-expanded numerator; not a semi-invariant")]
    NotDivisible { s: u32 },

    #[error("fraction is not homogeneous in (degree, weight)")]
    Inhomogeneous,

    #[error("the zero fraction has no grading")]
    ZeroFraction,

    #[error("polynomial is not homogeneous in Y1, Y2")]
    NotCovariant,

    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(String),

    #[error("D2 did not vanish within {bound} steps; input is not a semi-invariant")]
    NilpotencyBound { bound: u32 },

    #[error("transvectant index {r} exceeds the operand orders ({m}, {k})")]
    OrderOutOfRange { r: u32, m: i64, k: i64 },

    #[error("x1 terms survived in the semitransvectant sum")]
    Cancellation,

    #[error("mixed gradings in one vectorization")]
    MixedGradings,

    #[error("negative delta {delta} at degree {degree}: dim I = {dim}, sigma = {sigma}, dim S = {syz}")]
    NegativeDelta { degree: u32, delta: i64, dim: u64, sigma: u64, syz: u64 },

    #[error("unknown name {0:?}")]
    UnknownName(String),

    #[error("line {line}: {msg}")]
    Recipe { line: usize, msg: String },

    #[error("{0}")]
    Search(String),

    #[error("hash mismatch for {name}: manifest {expected}, file {actual}")]
    HashMismatch { name: String, expected: String, actual: String },

    #[error("manifest: {0}")]
    Manifest(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
