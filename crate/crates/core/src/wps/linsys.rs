//! Derivative conditions at e = (1, 1, 1): multiplicity, effectivity
//! kernels, and the 6x6 determinant in the critical degree.
//!
//! Because every relevant polynomial is weighted homogeneous, the Euler
//! identity cascades vanishing downward: if all order-k partials vanish
//! at e then so do all lower orders.  The kernels are nevertheless
//! built from all orders below the target, which costs a few redundant
//! rows and buys an assert-friendly invariant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactmath::{det_exact_int, kernel_basis, IntMatrix, RatMatrix};
use crate::poly::{Polynomial, Rationals};

use super::{monomials_of_weighted_degree, DivClass, WeightedTriple, WpsError};

/// Falling factorial n(n-1)...(n-k+1); zero when k exceeds n.
fn falling(n: u64, k: u32) -> BigInt {
    if u64::from(k) > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for step in 0..u64::from(k) {
        acc *= BigInt::from(n - step);
    }
    acc
}

/// Value at (1, 1, 1) of the order-(orders) partial derivative of the
/// monomial x^e0 y^e1 z^e2.
fn monomial_derivative_at_ones(exps: [u64; 3], orders: [u32; 3]) -> BigInt {
    falling(exps[0], orders[0]) * falling(exps[1], orders[1]) * falling(exps[2], orders[2])
}

/// Multi-indices of the given total order, lexicographically
/// descending: (k,0,0), (k-1,1,0), (k-1,0,1), ..., (0,0,k).
fn derivative_orders(k: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for alpha in (0..=k).rev() {
        for beta in (0..=k - alpha).rev() {
            out.push([alpha, beta, k - alpha - beta]);
        }
    }
    out
}

/// Order of vanishing at e = (1, 1, 1): the smallest k such that some
/// order-k partial derivative does not vanish there.
pub fn multiplicity_at_e(
    f: &Polynomial<Rationals>,
    t: &WeightedTriple,
) -> Result<u64, WpsError> {
    assert_eq!(f.nvars(), 3, "multiplicity is computed in three variables");
    if f.is_zero() {
        return Err(WpsError::ZeroPolynomial);
    }
    debug_assert!(t.grading().is_homogeneous(f), "curve equations are weighted homogeneous");
    let bound = f.total_degree().expect("nonzero polynomial");
    for k in 0u32.. {
        for orders in derivative_orders(k) {
            let mut value = BigRational::zero();
            for (m, coeff) in f.terms() {
                let exps = [u64::from(m.0[0]), u64::from(m.0[1]), u64::from(m.0[2])];
                value += coeff * BigRational::from(monomial_derivative_at_ones(exps, orders));
            }
            if !value.is_zero() {
                return Ok(u64::from(k));
            }
        }
        assert!(
            u64::from(k) <= bound,
            "some derivative of order at most the total degree must survive"
        );
    }
    unreachable!()
}

/// Basis of the sections of dH - lE: weighted-degree-d polynomials
/// whose partials of every order below l vanish at e = (1, 1, 1).
/// Deterministic: monomials in lexicographic order, kernel in the
/// reduced-echelon free-column convention.
pub fn effectivity_kernel(t: &WeightedTriple, cls: &DivClass) -> Vec<Polynomial<Rationals>> {
    if cls.d < 0 {
        return Vec::new();
    }
    let monos = monomials_of_weighted_degree(t, cls.d as u64);
    if monos.is_empty() {
        return Vec::new();
    }
    let orders: Vec<[u32; 3]> = (0..cls.l.max(0) as u32).flat_map(derivative_orders).collect();
    let mut m = RatMatrix::zero(orders.len(), monos.len());
    for (r, o) in orders.iter().enumerate() {
        for (c, e) in monos.iter().enumerate() {
            m.set(r, c, BigRational::from(monomial_derivative_at_ones(*e, *o)));
        }
    }
    kernel_basis(&m)
        .into_iter()
        .map(|coeffs| {
            Polynomial::from_terms(
                Rationals,
                3,
                monos.iter().zip(coeffs).map(|(e, c)| {
                    let exps = e
                        .iter()
                        .map(|&x| u32::try_from(x).expect("exponent fits in u32"))
                        .collect();
                    (exps, c)
                }),
            )
            .expect("three-variable terms")
        })
        .collect()
}

/// The determinant deciding that no section of dH - 3E exists in the
/// critical degree d = (7m-3)(8m-3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D1Determinant {
    pub m: u64,
    pub determinant: BigInt,
    pub closed_form: BigInt,
    pub equal: bool,
}

/// Builds the 6x6 matrix of second-derivative conditions at e against
/// the six critical-degree monomials and compares its determinant with
/// the closed form 4(7m-3)^2 (8m-3)^2 (7m-4)(8m-4)(51m^2-43m+9), up to
/// sign.
pub fn d1_determinant(m: u64) -> Result<D1Determinant, WpsError> {
    if m < 4 || m % 3 == 0 {
        return Err(WpsError::BadParameter(format!(
            "need m >= 4 and m not divisible by 3, got {m}"
        )));
    }
    let t = WeightedTriple::new(7 * m - 3, 5 * m * m - 2 * m, 8 * m - 3)?;
    let degree = (7 * m - 3) * (8 * m - 3);
    let found = monomials_of_weighted_degree(&t, degree);
    let expected = [
        [m - 1, 5, 3 * m - 2],
        [4 * m - 2, 4, m - 1],
        [2 * m - 1, 2, 4 * m - 2],
        [5 * m - 2, 1, 2 * m - 1],
        [8 * m - 3, 0, 0],
        [0, 0, 7 * m - 3],
    ];
    if found.len() != 6 {
        return Err(WpsError::EnumerationMismatch(format!(
            "degree {degree} has {} monomials, expected 6",
            found.len()
        )));
    }
    let mut sorted = expected;
    sorted.sort();
    if found != sorted {
        return Err(WpsError::EnumerationMismatch(format!(
            "degree-{degree} monomials differ from the six expected ones: {found:?}"
        )));
    }
    let rows = derivative_orders(2);
    let mut matrix = IntMatrix::zero(6, 6);
    for (r, o) in rows.iter().enumerate() {
        for (c, e) in expected.iter().enumerate() {
            matrix.set(r, c, monomial_derivative_at_ones(*e, *o));
        }
    }
    let determinant = det_exact_int(&matrix).expect("square matrix");
    let closed_form = BigInt::from(4u64)
        * BigInt::from(7 * m - 3).pow(2)
        * BigInt::from(8 * m - 3).pow(2)
        * BigInt::from(7 * m - 4)
        * BigInt::from(8 * m - 4)
        * BigInt::from(51 * m * m - 43 * m + 9);
    let equal = determinant.abs() == closed_form.abs();
    Ok(D1Determinant { m, determinant, closed_form, equal })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(terms: &[(i64, [u32; 3])]) -> Polynomial<Rationals> {
        Polynomial::from_terms(
            Rationals,
            3,
            terms.iter().map(|&(c, e)| (e.to_vec(), rat(c, 1))),
        )
        .unwrap()
    }

    #[test]
    fn multiplicity_examples() {
        let ones = WeightedTriple::new(1, 1, 1).unwrap();
        assert_eq!(multiplicity_at_e(&poly(&[(1, [1, 0, 0])]), &ones).unwrap(), 0);
        // (x - y)^2 vanishes to order exactly 2.
        let square = poly(&[(1, [2, 0, 0]), (-2, [1, 1, 0]), (1, [0, 2, 0])]);
        assert_eq!(multiplicity_at_e(&square, &ones).unwrap(), 2);
        let t = WeightedTriple::new(25, 72, 29).unwrap();
        let cubic = poly(&[(1, [0, 3, 0]), (-1, [4, 0, 4])]);
        assert_eq!(multiplicity_at_e(&cubic, &t).unwrap(), 1);
        assert!(matches!(
            multiplicity_at_e(&Polynomial::zero(Rationals, 3), &ones),
            Err(WpsError::ZeroPolynomial)
        ));
    }

    #[test]
    fn kernel_dimensions_for_plain_weights() {
        let ones = WeightedTriple::new(1, 1, 1).unwrap();
        let dims = [
            ((2, 1), 5),
            ((2, 3), 0),
            ((1, 1), 2),
            ((3, 2), 7),
            ((4, 3), 9),
            ((5, 5), 6),
        ];
        for ((d, l), expected) in dims {
            assert_eq!(
                effectivity_kernel(&ones, &DivClass::new(d, l)).len(),
                expected,
                "class {d}H - {l}E"
            );
        }
    }

    #[test]
    fn kernel_dimension_matches_the_point_count_formula() {
        let ones = WeightedTriple::new(1, 1, 1).unwrap();
        let choose2 = |n: i64| n * (n - 1) / 2;
        for d in 0i64..=6 {
            for l in 0i64..=d {
                let dim = effectivity_kernel(&ones, &DivClass::new(d, l)).len() as i64;
                let predicted = (choose2(d + 2) - choose2(l + 1)).max(0);
                assert_eq!(dim, predicted, "d = {d}, l = {l}");
            }
        }
    }

    #[test]
    fn critical_class_carries_no_sections() {
        let t = WeightedTriple::new(25, 72, 29).unwrap();
        assert!(effectivity_kernel(&t, &DivClass::new(725, 3)).is_empty());
    }

    #[test]
    fn kernel_elements_vanish_to_the_stated_order() {
        let t = WeightedTriple::new(1, 2, 3).unwrap();
        for (d, l) in [(6, 2), (6, 3), (12, 4)] {
            for f in effectivity_kernel(&t, &DivClass::new(d, l)) {
                assert!(multiplicity_at_e(&f, &t).unwrap() >= l as u64);
            }
        }
    }

    #[test]
    fn top_order_conditions_suffice() {
        // The Euler cascade: imposing only the order-(l-1) rows cuts
        // out the same space as imposing every order below l.
        let t = WeightedTriple::new(1, 2, 3).unwrap();
        let (d, l) = (6i64, 3u32);
        let monos = monomials_of_weighted_degree(&t, d as u64);
        let top: Vec<[u32; 3]> = derivative_orders(l - 1);
        let mut m = RatMatrix::zero(top.len(), monos.len());
        for (r, o) in top.iter().enumerate() {
            for (c, e) in monos.iter().enumerate() {
                m.set(r, c, BigRational::from(monomial_derivative_at_ones(*e, *o)));
            }
        }
        let top_kernel = kernel_basis(&m);
        let full = effectivity_kernel(&t, &DivClass::new(d, l as i64));
        assert_eq!(top_kernel.len(), full.len());
    }

    #[test]
    fn determinant_matches_the_closed_form() {
        let r4 = d1_determinant(4).unwrap();
        assert!(r4.equal);
        assert_eq!(r4.determinant.abs(), BigInt::from(922610640000u64));
        let r5 = d1_determinant(5).unwrap();
        assert!(r5.equal);
        assert_eq!(r5.determinant.abs(), BigInt::from(6689679261696u64));
        assert!(d1_determinant(6).is_err());
        assert!(d1_determinant(3).is_err());
    }
}
