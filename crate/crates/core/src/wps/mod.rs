//! Divisor classes and effectivity on a weighted projective plane blown
//! up at the identity point of the torus.
//!
//! The surface is P(a, b, c) for pairwise coprime weights, blown up at
//! e = (1, 1, 1).  Its class group is free on the hyperplane pullback H
//! and the exceptional curve E, with H^2 = 1/(abc), H.E = 0 and
//! E^2 = -1.  Sections of dH - lE are weighted-degree-d polynomials
//! vanishing to order l at e, which turns effectivity questions into
//! exact kernel computations over the rationals: enumerate monomials,
//! impose the derivative conditions at e, and read off a basis.
//!
//! On top of that sit the two computations the toolkit exists for: the
//! 6x6 determinant showing 𝒪(dH - 3E) has no sections in the critical
//! degree, and the search for divisors meeting a fixed negative curve
//! in zero that do not contain it, which is the membership obstruction
//! for symbolic powers of the monomial-curve ideal.

mod linsys;
mod witness;

pub use linsys::{d1_determinant, effectivity_kernel, multiplicity_at_e, D1Determinant};
pub use witness::{huneke_witness_search, in_symbolic_power, negative_curve, orthogonal_class};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use thiserror::Error;

use crate::poly::{PolyError, Polynomial, Rationals, WeightedGrading};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WpsError {
    #[error("weights must be positive, got ({0}, {1}, {2})")]
    NonPositiveWeight(u64, u64, u64),
    #[error("weights ({0}, {1}, {2}) are not pairwise coprime")]
    NotCoprime(u64, u64, u64),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("the zero polynomial has no multiplicity")]
    ZeroPolynomial,
    #[error("monomial enumeration mismatch: {0}")]
    EnumerationMismatch(String),
    #[error("curve class has non-negative self-intersection {0}")]
    NotNegativeCurve(String),
    #[error("no positive class is orthogonal to {0}")]
    NoOrthogonalClass(String),
    #[error("curve data is inconsistent: {0}")]
    ClassMismatch(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Pairwise coprime positive weights of the plane P(a, b, c).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightedTriple {
    a: u64,
    b: u64,
    c: u64,
}

impl WeightedTriple {
    pub fn new(a: u64, b: u64, c: u64) -> Result<WeightedTriple, WpsError> {
        if a == 0 || b == 0 || c == 0 {
            return Err(WpsError::NonPositiveWeight(a, b, c));
        }
        if a.gcd(&b) != 1 || b.gcd(&c) != 1 || a.gcd(&c) != 1 {
            return Err(WpsError::NotCoprime(a, b, c));
        }
        Ok(WeightedTriple { a, b, c })
    }

    pub fn weights(&self) -> (u64, u64, u64) {
        (self.a, self.b, self.c)
    }

    pub fn product(&self) -> u64 {
        self.a * self.b * self.c
    }

    pub fn grading(&self) -> WeightedGrading {
        WeightedGrading::new(vec![self.a, self.b, self.c])
    }
}

impl std::fmt::Display for WeightedTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// The class dH - lE on the blown-up plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivClass {
    pub d: i64,
    pub l: i64,
}

impl DivClass {
    pub fn new(d: i64, l: i64) -> DivClass {
        DivClass { d, l }
    }

    pub fn scaled(&self, k: i64) -> DivClass {
        DivClass { d: self.d * k, l: self.l * k }
    }
}

impl std::fmt::Display for DivClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.l >= 0 {
            write!(f, "{}H - {}E", self.d, self.l)
        } else {
            write!(f, "{}H + {}E", self.d, -self.l)
        }
    }
}

/// Intersection number of two classes: H^2 = 1/(abc), H.E = 0,
/// E^2 = -1.
pub fn class_intersection(t: &WeightedTriple, u: &DivClass, v: &DivClass) -> BigRational {
    let h_part = BigRational::new(BigInt::from(u.d) * BigInt::from(v.d), BigInt::from(t.product()));
    h_part - BigRational::from(BigInt::from(u.l) * BigInt::from(v.l))
}

/// All exponent triples (i, j, k) with a*i + b*j + c*k = d, in
/// lexicographic order.
pub fn monomials_of_weighted_degree(t: &WeightedTriple, d: u64) -> Vec<[u64; 3]> {
    let (a, b, c) = t.weights();
    let mut out = Vec::new();
    for i in 0..=d / a {
        let rest = d - a * i;
        for j in 0..=rest / b {
            let tail = rest - b * j;
            if tail % c == 0 {
                out.push([i, j, tail / c]);
            }
        }
    }
    out
}

/// A curve on the blown-up plane: a weighted-homogeneous equation
/// together with its class, kept consistent by construction.
#[derive(Debug, Clone)]
pub struct CurveData {
    f: Polynomial<Rationals>,
    cls: DivClass,
    triple: WeightedTriple,
}

impl CurveData {
    /// Checks that the equation matches the class: weighted degree d
    /// and multiplicity l at e = (1, 1, 1).
    pub fn new(
        f: Polynomial<Rationals>,
        cls: DivClass,
        triple: WeightedTriple,
    ) -> Result<CurveData, WpsError> {
        let degree = triple.grading().weighted_degree(&f)?;
        if cls.d < 0 || degree != cls.d as u64 {
            return Err(WpsError::ClassMismatch(format!(
                "equation has weighted degree {degree}, class is {cls}"
            )));
        }
        let mult = multiplicity_at_e(&f, &triple)?;
        if cls.l < 0 || mult != cls.l as u64 {
            return Err(WpsError::ClassMismatch(format!(
                "equation has multiplicity {mult} at e, class is {cls}"
            )));
        }
        Ok(CurveData { f, cls, triple })
    }

    pub fn equation(&self) -> &Polynomial<Rationals> {
        &self.f
    }

    pub fn class(&self) -> DivClass {
        self.cls
    }

    pub fn triple(&self) -> WeightedTriple {
        self.triple
    }

    pub fn self_intersection(&self) -> BigRational {
        class_intersection(&self.triple, &self.cls, &self.cls)
    }
}
