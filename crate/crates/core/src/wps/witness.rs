//! Symbolic-power membership along the monomial curve and the search
//! for orthogonal effective divisors not containing a fixed negative
//! curve.
//!
//! Membership in the l-th symbolic power of the curve ideal is decided
//! by the differential criterion: all partials of order below l vanish
//! on the parametrization t -> (t^a, t^b, t^c).  That criterion is a
//! characteristic-zero statement, which the types enforce by working
//! over the rationals only.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::poly::{Polynomial, Rationals};

use super::{
    class_intersection, effectivity_kernel, CurveData, DivClass, WeightedTriple, WpsError,
};

/// Membership test for the l-th symbolic power of the ideal of the
/// curve (t^a, t^b, t^c): every partial derivative of f of order
/// below l must vanish identically on the curve.
pub fn in_symbolic_power(f: &Polynomial<Rationals>, l: u64, t: &WeightedTriple) -> bool {
    assert_eq!(f.nvars(), 3, "membership is tested in three variables");
    assert!(l >= 1, "symbolic powers start at l = 1");
    let (a, b, c) = t.weights();
    for order in 0..l {
        let k = u32::try_from(order).expect("order fits in u32");
        for alpha in 0..=k {
            for beta in 0..=k - alpha {
                let orders = [alpha, beta, k - alpha - beta];
                let derivative = f.derivative(&orders).expect("three variables");
                if !derivative.substitute_powers(&[a, b, c]).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// The distinguished negative curve y^3 - x^m z^m on the blow-up of
/// P(7m-3, 5m^2-2m, 8m-3), of class 3(5m^2-2m)H - E.
pub fn negative_curve(m: u64) -> Result<CurveData, WpsError> {
    if m < 4 || m % 3 == 0 {
        return Err(WpsError::BadParameter(format!(
            "need m >= 4 and m not divisible by 3, got {m}"
        )));
    }
    let t = WeightedTriple::new(7 * m - 3, 5 * m * m - 2 * m, 8 * m - 3)?;
    let q = Rationals;
    let me = u32::try_from(m).expect("m fits in u32");
    let f = Polynomial::monomial(q, BigInt::from(1).into(), &[0, 3, 0])
        .sub(&Polynomial::monomial(q, BigInt::from(1).into(), &[me, 0, me]));
    let d = i64::try_from(3 * (5 * m * m - 2 * m)).expect("class fits in i64");
    let curve = CurveData::new(f, DivClass::new(d, 1), t)?;
    let self_int = curve.self_intersection();
    if !self_int.is_negative() {
        return Err(WpsError::NotNegativeCurve(self_int.to_string()));
    }
    Ok(curve)
}

/// The primitive class with positive coefficients orthogonal to `cls`
/// under the intersection pairing.
pub fn orthogonal_class(t: &WeightedTriple, cls: &DivClass) -> Result<DivClass, WpsError> {
    // d*d0 = abc * l*l0 has a positive primitive solution exactly when
    // both coefficients are positive.
    if cls.d <= 0 || cls.l <= 0 {
        return Err(WpsError::NoOrthogonalClass(cls.to_string()));
    }
    let abc_l = i64::try_from(t.product()).expect("weights fit") * cls.l;
    let g = abc_l.gcd(&cls.d);
    Ok(DivClass::new(abc_l / g, cls.d / g))
}

/// Scans multiples of the class orthogonal to a negative curve for
/// effective divisors not containing the curve.
///
/// Level k is a witness when some basis element of the sections of
/// k*(d0 H - l0 E) is not divisible by the curve equation; since
/// divisibility by a fixed polynomial cuts out a linear subspace, the
/// whole space consists of multiples exactly when every basis element
/// does.  Returns the witness levels with one non-multiple each.
pub fn huneke_witness_search(
    t: &WeightedTriple,
    curve: &CurveData,
    k_max: u64,
) -> Result<Vec<(u64, Polynomial<Rationals>)>, WpsError> {
    let self_int = class_intersection(t, &curve.class(), &curve.class());
    if !self_int.is_negative() {
        return Err(WpsError::NotNegativeCurve(self_int.to_string()));
    }
    let base = orthogonal_class(t, &curve.class())?;
    let mut witnesses = Vec::new();
    for k in 1..=k_max {
        let cls = base.scaled(i64::try_from(k).expect("level fits"));
        debug_assert!(class_intersection(t, &cls, &curve.class()).is_zero());
        let basis = effectivity_kernel(t, &cls);
        if let Some(poly) = basis.into_iter().find(|f| !curve.equation().divides(f)) {
            witnesses.push((k, poly));
        }
    }
    Ok(witnesses)
}
