//! The generator and witness polynomials of the monomial-curve ideal
//! for the weights (7m-3, 5m^2-2m, 8m-3), their four defining
//! identities, and the characteristic-p section built from them.
//!
//! Everything is assembled from explicit formulas and then checked,
//! never the other way around: the identities are expanded by exact
//! polynomial arithmetic over the rationals, and the char-p witness is
//! constructed over F_p and verified for divisibility, degree,
//! non-divisibility by the cubic, and vanishing on the curve.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::poly::{CoeffField, PolyError, Polynomial, PrimeField, Rationals, WeightedGrading};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GnwError {
    #[error("need m >= 4, got {0}")]
    SmallM(u64),
    #[error("need m not divisible by 3, got {0}")]
    BadResidue(u64),
    #[error("need an odd prime, got {0}")]
    NotOddPrime(u64),
    #[error("right-hand side is not divisible by z^{0}")]
    NotDivisible(u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The six polynomials attached to the parameter m, graded by
/// (7m-3, 5m^2-2m, 8m-3).
#[derive(Debug, Clone)]
pub struct GnwSystem {
    pub m: u64,
    pub g_a: Polynomial<Rationals>,
    pub g_b: Polynomial<Rationals>,
    pub g_c: Polynomial<Rationals>,
    pub d2: Polynomial<Rationals>,
    pub d3: Polynomial<Rationals>,
    pub d3p: Polynomial<Rationals>,
}

impl GnwSystem {
    pub fn grading(&self) -> WeightedGrading {
        let m = self.m;
        WeightedGrading::new(vec![7 * m - 3, 5 * m * m - 2 * m, 8 * m - 3])
    }

    pub fn curve_weights(&self) -> [u64; 3] {
        let m = self.m;
        [7 * m - 3, 5 * m * m - 2 * m, 8 * m - 3]
    }
}

fn mono(c: i64, exps: [u32; 3]) -> Polynomial<Rationals> {
    Polynomial::monomial(Rationals, BigRational::from(BigInt::from(c)), &exps)
}

fn sum(terms: &[(i64, [u32; 3])]) -> Polynomial<Rationals> {
    Polynomial::from_terms(
        Rationals,
        3,
        terms.iter().map(|&(c, e)| (e.to_vec(), BigRational::from(BigInt::from(c)))),
    )
    .expect("three-variable terms")
}

/// Builds the system at parameter m and checks its invariants: every
/// polynomial is weighted homogeneous and vanishes under the
/// substitution x -> t^a, y -> t^b, z -> t^c.
pub fn gnw_system(m: u64) -> Result<GnwSystem, GnwError> {
    if m < 4 {
        return Err(GnwError::SmallM(m));
    }
    let mm = u32::try_from(m).expect("m fits in u32");
    let g_a = sum(&[(1, [0, 0, 3 * mm - 1]), (-1, [2 * mm - 1, 2, 0])]);
    let g_b = sum(&[(1, [3 * mm - 1, 0, 0]), (-1, [0, 1, 2 * mm - 1])]);
    let g_c = sum(&[(1, [0, 3, 0]), (-1, [mm, 0, mm])]);
    let d2 = sum(&[
        (1, [mm - 1, 5, mm - 1]),
        (-3, [2 * mm - 1, 2, 2 * mm - 1]),
        (1, [5 * mm - 2, 1, 0]),
        (1, [0, 0, 5 * mm - 2]),
    ]);
    let d3 = sum(&[
        (-1, [3 * mm - 2, 7, 0]),
        (2, [mm - 1, 5, 3 * mm - 1]),
        (1, [4 * mm - 2, 4, mm]),
        (-5, [2 * mm - 1, 2, 4 * mm - 1]),
        (3, [5 * mm - 2, 1, 2 * mm]),
        (-1, [8 * mm - 3, 0, 1]),
        (1, [0, 0, 7 * mm - 2]),
    ]);
    let d3p = sum(&[
        (1, [0, 8, 2 * mm - 2]),
        (-4, [mm, 5, 3 * mm - 2]),
        (1, [4 * mm - 1, 4, mm - 1]),
        (6, [2 * mm, 2, 4 * mm - 2]),
        (-4, [5 * mm - 1, 1, 2 * mm - 1]),
        (1, [8 * mm - 2, 0, 0]),
        (-1, [1, 0, 7 * mm - 3]),
    ]);
    let sys = GnwSystem { m, g_a, g_b, g_c, d2, d3, d3p };
    let grading = sys.grading();
    let weights = sys.curve_weights();
    for f in [&sys.g_a, &sys.g_b, &sys.g_c, &sys.d2, &sys.d3, &sys.d3p] {
        assert!(grading.is_homogeneous(f), "system polynomials are weighted homogeneous");
        assert!(
            f.substitute_powers(&weights).is_zero(),
            "system polynomials vanish on the monomial curve"
        );
    }
    Ok(sys)
}

/// Outcome of expanding one left-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    /// A surviving term when the identity fails.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub m: u64,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn check(name: &'static str, lhs: Polynomial<Rationals>) -> IdentityCheck {
    let witness = lhs.leading().map(|(mono, coeff)| {
        let single =
            Polynomial::from_terms(Rationals, 3, [(mono.0.clone(), coeff.clone())]).unwrap();
        single.to_string()
    });
    IdentityCheck { name, holds: lhs.is_zero(), witness }
}

/// Expands the four defining identities of the given system by exact
/// arithmetic.  On `gnw_system(m)` output all four are zero; for a
/// tampered system the report carries a surviving term.
pub fn system_identities(sys: &GnwSystem) -> IdentityReport {
    let mm = u32::try_from(sys.m).expect("m fits in u32");
    let x = |e: u32| mono(1, [e, 0, 0]);
    let y = |e: u32| mono(1, [0, e, 0]);
    let z = |e: u32| mono(1, [0, 0, e]);
    let b2 = sys.g_b.mul(&sys.g_b);
    let lhs1 = x(mm)
        .mul(&sys.d2)
        .sub(&y(1).mul(&b2))
        .add(&z(mm - 1).mul(&sys.g_a).mul(&sys.g_c));
    let lhs2 = x(mm - 1)
        .mul(&b2)
        .mul(&sys.g_c)
        .add(&sys.g_a.mul(&sys.d2))
        .sub(&z(mm - 1).mul(&sys.d3));
    let lhs3 = x(1).mul(&sys.d3).add(&y(1).mul(&sys.g_b).mul(&sys.g_c).mul(&sys.g_c)).add(
        &z(1).mul(&sys.d3p),
    );
    let lhs4 = x(mm)
        .mul(&sys.g_a)
        .add(&y(2).mul(&sys.g_b))
        .add(&z(2 * mm - 1).mul(&sys.g_c));
    IdentityReport {
        m: sys.m,
        checks: vec![
            check("x^m d2 - y b^2 + z^(m-1) a c", lhs1),
            check("x^(m-1) b^2 c + a d2 - z^(m-1) d3", lhs2),
            check("x d3 + y b c^2 + z d3'", lhs3),
            check("x^m a + y^2 b + z^(2m-1) c", lhs4),
        ],
    }
}

/// Builds the system at m and expands its four identities.
pub fn verify_identities(m: u64) -> Result<IdentityReport, GnwError> {
    Ok(system_identities(&gnw_system(m)?))
}

/// The characteristic-p section h of degree p(7m-3)(8m-3) vanishing to
/// high order on the curve: z^p h = d3^p + (-1)^q sum over
/// (2m-1)i < p of C(q,i) x^(m(q-i)-p) y z^((2m-1)i) a^(q-i) b^(p-q)
/// c^(2p+i), with q = (p-1)/2.
///
/// The right-hand side is assembled over F_p and divided by z^p; the
/// quotient is checked for weighted degree, for not being divisible by
/// the cubic c, and for vanishing on the curve.
pub fn char_p_witness(m: u64, p: u64) -> Result<Polynomial<PrimeField>, GnwError> {
    if p == 2 {
        return Err(GnwError::NotOddPrime(p));
    }
    if m < 4 {
        return Err(GnwError::SmallM(m));
    }
    if m % 3 == 0 {
        return Err(GnwError::BadResidue(m));
    }
    let fp = PrimeField::new(p).map_err(|_| GnwError::NotOddPrime(p))?;
    let sys = gnw_system(m)?;
    let q = (p - 1) / 2;
    // Every index is either a kept, well-formed term or one whose
    // z-exponent already clears z^p.
    for i in 0..=q {
        assert!(
            m * (q - i) >= p || (2 * m - 1) * i >= p,
            "term {i} is neither well-formed nor absorbed"
        );
    }
    let a = sys.g_a.reduce_mod(fp)?;
    let b = sys.g_b.reduce_mod(fp)?;
    let c = sys.g_c.reduce_mod(fp)?;
    let d3 = sys.d3.reduce_mod(fp)?;
    let pe = u32::try_from(p).expect("p fits in u32");
    let sign = if q % 2 == 0 { 1 } else { p - 1 };
    let mut rhs = d3.pow(pe);
    for i in 0..=q {
        if (2 * m - 1) * i >= p {
            continue;
        }
        let binom: BigInt = num_integer::binomial(BigInt::from(q), BigInt::from(i));
        let coeff = fp.mul(&sign, &fp.from_bigint(&binom));
        let xe = u32::try_from(m * (q - i) - p).expect("exponent fits");
        let ze = u32::try_from((2 * m - 1) * i).expect("exponent fits");
        let head = Polynomial::monomial(fp, coeff, &[xe, 1, ze]);
        let term = head
            .mul(&a.pow(u32::try_from(q - i).expect("fits")))
            .mul(&b.pow(u32::try_from(p - q).expect("fits")))
            .mul(&c.pow(u32::try_from(2 * p + i).expect("fits")));
        rhs = rhs.add(&term);
    }
    let zp = Polynomial::monomial(fp, fp.one(), &[0, 0, pe]);
    let h = rhs.exact_divide(&zp).map_err(|_| GnwError::NotDivisible(p))?;
    let grading = sys.grading();
    assert_eq!(
        grading.weighted_degree(&h),
        Ok(p * (7 * m - 3) * (8 * m - 3)),
        "section has the critical weighted degree"
    );
    assert!(!c.divides(&h), "the cubic must not divide the section");
    assert!(
        h.substitute_powers(&sys.curve_weights()).is_zero(),
        "section vanishes on the curve"
    );
    Ok(h)
}
