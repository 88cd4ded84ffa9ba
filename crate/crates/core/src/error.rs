//! Error type shared by all modules of the crate.

use std::fmt;

/// Errors produced by ring arithmetic, factorization searches and the
/// reduction pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Two operands live in different rings (coefficient kind, modulus or
    /// variable count differ).
    RingMismatch(String),
    /// Exponent tuples of different lengths were compared.
    LengthMismatch { left: usize, right: usize },
    /// A polynomial was expected to be lexicographically monic.
    NotLexMonic(String),
    /// The requested coefficient ring / variable count combination has no
    /// effective algorithm in this crate.
    UnsupportedRing(String),
    /// An enumeration search exhausted its candidate cap. The payload names
    /// the phase or step that failed, so a failure localizes.
    SearchCapExceeded { phase: String, cap: usize },
    /// A factorization procedure could not produce a word satisfying its
    /// contract. Never silently ignored: the caller gets this instead of a
    /// wrong word.
    FactorizationFailure(String),
    /// An index pair is not valid for the requested transvection kind.
    InvalidIndex(String),
    /// Vector or matrix shapes are incompatible.
    ShapeMismatch(String),
    /// A matrix expected to preserve the quadratic form does not.
    NotOrthogonal(String),
    /// A column failed the isotropic-unimodular test.
    NotIsotropicUnimodular(String),
    /// A square matrix has no inverse over the ring.
    NotInvertible(String),
    /// Odd-parity operations require coefficient characteristic != 2.
    CharacteristicTwo,
    /// The rank r is below the threshold required by the operation.
    RankTooSmall { r: usize, required: usize },
    /// Parse error in a polynomial, column, word or certificate text.
    Parse(String),
    /// An internal invariant that certified data should make impossible was
    /// violated; indicates a bug, not a bad input.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RingMismatch(s) => write!(f, "ring mismatch: {s}"),
            Error::LengthMismatch { left, right } => {
                write!(f, "exponent tuple length mismatch: {left} vs {right}")
            }
            Error::NotLexMonic(s) => write!(f, "not lexicographically monic: {s}"),
            Error::UnsupportedRing(s) => write!(f, "unsupported ring: {s}"),
            Error::SearchCapExceeded { phase, cap } => {
                write!(f, "search cap {cap} exceeded in {phase}")
            }
            Error::FactorizationFailure(s) => write!(f, "factorization failure: {s}"),
            Error::InvalidIndex(s) => write!(f, "invalid index: {s}"),
            Error::ShapeMismatch(s) => write!(f, "shape mismatch: {s}"),
            Error::NotOrthogonal(s) => write!(f, "matrix is not orthogonal: {s}"),
            Error::NotIsotropicUnimodular(s) => {
                write!(f, "column is not isotropic unimodular: {s}")
            }
            Error::NotInvertible(s) => write!(f, "matrix is not invertible: {s}"),
            Error::CharacteristicTwo => {
                write!(f, "odd-parity operations require characteristic != 2")
            }
            Error::RankTooSmall { r, required } => {
                write!(f, "rank {r} is below the required minimum {required}")
            }
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::Internal(s) => write!(f, "internal invariant violated: {s}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
