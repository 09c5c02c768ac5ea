//! Sparse multivariate polynomials over exact coefficient fields.
//!
//! The coefficient field is a value (not just a type) so that all prime
//! fields share one implementation; see [`CoeffField`].  Monomials are
//! ordered graded-lexicographically, which fixes leading terms, the
//! division procedure, and the serialized term order.

mod field;
mod polynomial;

pub use field::{CoeffField, PrimeField, Rationals};
pub use polynomial::{Monomial, Polynomial, WeightedGrading};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("cannot invert zero")]
    DivisionByZero,
    #[error("expected {expected} exponents, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("not divisible: leading term {0} is not reducible")]
    NotDivisible(String),
    #[error("denominator of {0} vanishes modulo {1}")]
    BadReduction(String, u64),
    #[error("cannot parse {0:?} as a coefficient")]
    BadCoefficient(String),
    #[error("malformed polynomial data: {0}")]
    BadFormat(String),
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("inhomogeneous: terms of weighted degrees {0} and {1}")]
    Inhomogeneous(u64, u64),
}
