use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde_json::Value;

use super::{CoeffField, PolyError, PrimeField, Rationals};

/// Exponent vector.  Ordered by total degree first, then
/// lexicographically, so a `BTreeMap` keyed by `Monomial` iterates from
/// the smallest term to the leading one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `other / self`; caller must have checked divisibility.
    fn quotient_into(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over the field `F`.  Zero coefficients are never
/// stored, so equality of the term maps is equality of polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<F: CoeffField> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: CoeffField> Polynomial<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        Polynomial { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: F, nvars: usize, c: F::Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial(vec![0; nvars]), c);
        p
    }

    pub fn one(field: F, nvars: usize) -> Self {
        let c = field.one();
        Self::constant(field, nvars, c)
    }

    /// The variable `x_i`.
    pub fn var(field: F, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let c = field.one();
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial(exps), c);
        p
    }

    /// Single term `c * x^exps`.
    pub fn monomial(field: F, coeff: F::Elem, exps: &[u32]) -> Self {
        let mut p = Self::zero(field, exps.len());
        p.add_term(Monomial(exps.to_vec()), coeff);
        p
    }

    pub fn from_terms(
        field: F,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, F::Elem)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(field, nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(PolyError::ArityMismatch { expected: nvars, got: exps.len() });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    /// Graded-lex largest term.
    pub fn leading(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.last_key_value()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.leading().map(|(m, _)| m.total_degree())
    }

    fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = self.field.add(&old, &c);
                if !self.field.is_zero(&s) {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    fn assert_same_ring(&self, other: &Self) {
        assert!(
            self.field == other.field && self.nvars == other.nvars,
            "polynomials live in different rings"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_ring(other);
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.field.mul(a, c));
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field.clone(), self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative; in characteristic p the usual exponent
    /// factor can vanish, which is the intended behavior.
    pub fn partial_derivative(&self, var: usize) -> Self {
        assert!(var < self.nvars, "variable index out of range");
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] = e - 1;
            let factor = self.field.from_bigint(&BigInt::from(e));
            out.add_term(Monomial(exps), self.field.mul(c, &factor));
        }
        out
    }

    /// Iterated formal derivative `d^{o0}/dx0^{o0} ... d^{ok}/dxk^{ok}`.
    pub fn derivative(&self, orders: &[u32]) -> Result<Self, PolyError> {
        if orders.len() != self.nvars {
            return Err(PolyError::ArityMismatch { expected: self.nvars, got: orders.len() });
        }
        let mut out = self.clone();
        for (var, &o) in orders.iter().enumerate() {
            for _ in 0..o {
                out = out.partial_derivative(var);
            }
        }
        Ok(out)
    }

    /// Pullback along the monomial curve `t -> (t^w0, ..., t^wk)`; the
    /// result is univariate.
    pub fn substitute_powers(&self, powers: &[u64]) -> Self {
        assert_eq!(powers.len(), self.nvars, "one power per variable");
        let mut out = Self::zero(self.field.clone(), 1);
        for (m, c) in &self.terms {
            let d: u64 = m.0.iter().zip(powers).map(|(&e, &w)| u64::from(e) * w).sum();
            let e = u32::try_from(d).expect("substituted exponent fits in u32");
            out.add_term(Monomial(vec![e]), c.clone());
        }
        out
    }

    /// Quotient `self / divisor` when it is exact.
    ///
    /// Repeatedly cancels the leading term of the remainder against the
    /// leading term of the divisor.  If the leading monomial ever fails
    /// to be divisible it would survive into the remainder of ordinary
    /// multivariate division, so the division cannot be exact and the
    /// procedure stops with an error.  This makes it a complete
    /// divisibility test, not a heuristic.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self, PolyError> {
        self.assert_same_ring(divisor);
        let Some((dm, dc)) = divisor.leading() else {
            return Err(PolyError::DivisionByZero);
        };
        let dm = dm.clone();
        let dc_inv = self.field.inv(dc)?;
        let mut quotient = Self::zero(self.field.clone(), self.nvars);
        let mut rem = self.clone();
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return Err(PolyError::NotDivisible(format!(
                    "{}",
                    MonomialDisplay { m: rm, nvars: self.nvars }
                )));
            }
            let qm = dm.quotient_into(rm);
            let qc = self.field.mul(rc, &dc_inv);
            let term = Self::monomial(self.field.clone(), qc, &qm.0);
            rem = rem.sub(&term.mul(divisor));
            quotient = quotient.add(&term);
        }
        Ok(quotient)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_divide(self).is_ok()
    }

    /// Canonical serialization: ascending term order, each term a pair
    /// `[coefficient-string, [exponents...]]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    Value::Array(vec![
                        Value::String(self.field.render(c)),
                        Value::Array(m.0.iter().map(|&e| Value::from(e)).collect()),
                    ])
                })
                .collect(),
        )
    }

    pub fn from_json(field: F, nvars: usize, value: &Value) -> Result<Self, PolyError> {
        let bad = |msg: &str| PolyError::BadFormat(msg.to_string());
        let arr = value.as_array().ok_or_else(|| bad("expected an array of terms"))?;
        let mut out = Self::zero(field.clone(), nvars);
        for term in arr {
            let pair = term.as_array().ok_or_else(|| bad("term must be a pair"))?;
            if pair.len() != 2 {
                return Err(bad("term must be [coefficient, exponents]"));
            }
            let coeff_str = pair[0].as_str().ok_or_else(|| bad("coefficient must be a string"))?;
            let coeff = field.parse(coeff_str)?;
            let exps_raw = pair[1].as_array().ok_or_else(|| bad("exponents must be an array"))?;
            if exps_raw.len() != nvars {
                return Err(PolyError::ArityMismatch { expected: nvars, got: exps_raw.len() });
            }
            let mut exps = Vec::with_capacity(nvars);
            for e in exps_raw {
                let n = e
                    .as_u64()
                    .and_then(|n| u32::try_from(n).ok())
                    .ok_or_else(|| bad("exponent must be a small nonnegative integer"))?;
                exps.push(n);
            }
            out.add_term(Monomial(exps), coeff);
        }
        Ok(out)
    }
}

impl Polynomial<Rationals> {
    /// Reduces every coefficient modulo `p`; fails if a denominator
    /// vanishes there.
    pub fn reduce_mod(&self, fp: PrimeField) -> Result<Polynomial<PrimeField>, PolyError> {
        let mut out = Polynomial::zero(fp, self.nvars);
        for (m, c) in &self.terms {
            let den = fp.from_bigint(c.denom());
            if den == 0 {
                return Err(PolyError::BadReduction(Rationals.render(c), fp.modulus()));
            }
            let num = fp.from_bigint(c.numer());
            let r = fp.mul(&num, &fp.inv(&den)?);
            out.add_term(m.clone(), r);
        }
        Ok(out)
    }
}

/// Grading by positive integer weights, one per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGrading {
    pub weights: Vec<u64>,
}

impl WeightedGrading {
    pub fn new(weights: Vec<u64>) -> Self {
        WeightedGrading { weights }
    }

    pub fn standard(nvars: usize) -> Self {
        WeightedGrading { weights: vec![1; nvars] }
    }

    pub fn degree(&self, m: &Monomial) -> u64 {
        assert_eq!(m.0.len(), self.weights.len(), "monomial arity mismatch");
        m.0.iter().zip(&self.weights).map(|(&e, &w)| u64::from(e) * w).sum()
    }

    /// The common weighted degree of all terms.
    pub fn weighted_degree<F: CoeffField>(&self, f: &Polynomial<F>) -> Result<u64, PolyError> {
        let mut iter = f.terms();
        let d = self.degree(iter.next().ok_or(PolyError::ZeroPolynomial)?.0);
        for (m, _) in iter {
            let e = self.degree(m);
            if e != d {
                return Err(PolyError::Inhomogeneous(d, e));
            }
        }
        Ok(d)
    }

    pub fn is_homogeneous<F: CoeffField>(&self, f: &Polynomial<F>) -> bool {
        f.is_zero() || self.weighted_degree(f).is_ok()
    }

    /// Projection onto the terms of top weighted degree; handy for
    /// building homogeneous test inputs.
    pub fn top_graded_part<F: CoeffField>(&self, f: &Polynomial<F>) -> Polynomial<F> {
        let Some(top) = f.terms().map(|(m, _)| self.degree(m)).max() else {
            return f.clone();
        };
        let terms = f
            .terms()
            .filter(|(m, _)| self.degree(m) == top)
            .map(|(m, c)| (m.0.clone(), c.clone()));
        Polynomial::from_terms(f.field.clone(), f.nvars, terms).expect("arities match")
    }
}

struct MonomialDisplay<'a> {
    m: &'a Monomial,
    nvars: usize,
}

fn var_name(nvars: usize, i: usize) -> String {
    match (nvars, i) {
        (1, 0) => "t".into(),
        (2 | 3, 0) => "x".into(),
        (2 | 3, 1) => "y".into(),
        (3, 2) => "z".into(),
        _ => format!("x{i}"),
    }
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, &e) in self.m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if wrote {
                write!(f, "*")?;
            }
            wrote = true;
            write!(f, "{}", var_name(self.nvars, i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl<F: CoeffField> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let one = self.field.one();
        let minus_one = self.field.neg(&one);
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let constant = m.total_degree() == 0;
            let mut coeff = self.field.render(c);
            let mut lead_sign = "";
            if let Some(stripped) = coeff.strip_prefix('-') {
                lead_sign = "-";
                coeff = stripped.to_string();
            }
            if k == 0 {
                write!(f, "{lead_sign}")?;
            } else if lead_sign == "-" {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let md = MonomialDisplay { m, nvars: self.nvars };
            if constant {
                write!(f, "{coeff}")?;
            } else if *c == one || *c == minus_one {
                write!(f, "{md}")?;
            } else {
                write!(f, "{coeff}*{md}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q() -> Rationals {
        Rationals
    }

    fn p(terms: &[(i64, [u32; 3])]) -> Polynomial<Rationals> {
        Polynomial::from_terms(
            q(),
            3,
            terms.iter().map(|&(c, e)| (e.to_vec(), BigRational::from(num_bigint::BigInt::from(c)))),
        )
        .unwrap()
    }

    #[test]
    fn graded_lex_leading_term() {
        // In degree 2, x^2 beats x*y which beats y^2.
        let f = p(&[(1, [0, 2, 0]), (1, [1, 1, 0]), (1, [2, 0, 0]), (5, [0, 0, 1])]);
        let (m, _) = f.leading().unwrap();
        assert_eq!(m.0, vec![2, 0, 0]);
        let order: Vec<Vec<u32>> = f.terms().map(|(m, _)| m.0.clone()).collect();
        assert_eq!(order, vec![vec![0, 0, 1], vec![0, 2, 0], vec![1, 1, 0], vec![2, 0, 0]]);
    }

    #[test]
    fn cancellation_removes_terms() {
        let f = p(&[(1, [1, 0, 0]), (2, [0, 1, 0])]);
        let g = p(&[(-1, [1, 0, 0]), (3, [0, 0, 1])]);
        let s = f.add(&g);
        assert_eq!(s.num_terms(), 2);
        assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn exact_division_roundtrip() {
        let f = p(&[(1, [3, 0, 0]), (-1, [0, 2, 1]), (2, [1, 1, 1])]);
        let g = p(&[(1, [1, 1, 0]), (3, [0, 0, 2]), (-1, [0, 1, 0])]);
        let prod = f.mul(&g);
        assert_eq!(prod.exact_divide(&g).unwrap(), f);
        assert_eq!(prod.exact_divide(&f).unwrap(), g);
        let bumped = prod.add(&Polynomial::one(q(), 3));
        assert!(matches!(bumped.exact_divide(&g), Err(PolyError::NotDivisible(_))));
    }

    #[test]
    fn derivative_product_rule() {
        let f = p(&[(1, [2, 1, 0]), (-3, [0, 0, 4])]);
        let g = p(&[(5, [1, 1, 1]), (1, [0, 0, 0])]);
        for v in 0..3 {
            let lhs = f.mul(&g).partial_derivative(v);
            let rhs = f.partial_derivative(v).mul(&g).add(&f.mul(&g.partial_derivative(v)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn derivative_drops_multiples_of_p() {
        let f5 = PrimeField::new(5).unwrap();
        let f = Polynomial::monomial(f5, 1u64, &[5, 0, 0]);
        assert!(f.partial_derivative(0).is_zero());
        assert_eq!(f.partial_derivative(1), Polynomial::zero(f5, 3));
    }

    #[test]
    fn monomial_curve_substitution() {
        // x^3 - y^2 vanishes identically on t -> (t^2, t^3).
        let f = Polynomial::from_terms(
            q(),
            2,
            [
                (vec![3, 0], BigRational::from(num_bigint::BigInt::from(1))),
                (vec![0, 2], BigRational::from(num_bigint::BigInt::from(-1))),
            ],
        )
        .unwrap();
        assert!(f.substitute_powers(&[2, 3]).is_zero());
        // x - y does not.
        let g = Polynomial::var(q(), 2, 0).sub(&Polynomial::var(q(), 2, 1));
        assert_eq!(g.substitute_powers(&[2, 3]).num_terms(), 2);
    }

    #[test]
    fn weighted_homogeneity() {
        let w = WeightedGrading::new(vec![2, 3, 1]);
        let f = p(&[(1, [3, 0, 0]), (1, [0, 2, 0]), (4, [0, 1, 3])]);
        assert_eq!(w.weighted_degree(&f), Ok(6));
        let g = p(&[(1, [3, 0, 0]), (1, [0, 0, 1])]);
        assert_eq!(w.weighted_degree(&g), Err(PolyError::Inhomogeneous(1, 6)));
        assert_eq!(w.weighted_degree(&p(&[])), Err(PolyError::ZeroPolynomial));
        // 3*72 = 4*25 + 4*29 under the (25,72,29) grading.
        let w2 = WeightedGrading::new(vec![25, 72, 29]);
        let h = p(&[(1, [0, 3, 0]), (-1, [4, 0, 4])]);
        assert_eq!(w2.weighted_degree(&h), Ok(216));
    }

    #[test]
    fn iterated_derivative() {
        // d^2/dz^2 of z^3 is 6z.
        let f = p(&[(1, [0, 0, 3])]);
        assert_eq!(f.derivative(&[0, 0, 2]).unwrap(), p(&[(6, [0, 0, 1])]));
        assert!(f.derivative(&[0, 0]).is_err());
        // d/dy of z^11 - x^7 y^2 is -2 x^7 y.
        let g = p(&[(1, [0, 0, 11]), (-1, [7, 2, 0])]);
        assert_eq!(g.derivative(&[0, 1, 0]).unwrap(), p(&[(-2, [7, 1, 0])]));
    }

    #[test]
    fn reduction_mod_p() {
        let f5 = PrimeField::new(5).unwrap();
        let half = Polynomial::constant(q(), 1, BigRational::new(1.into(), 2.into()));
        assert_eq!(*half.reduce_mod(f5).unwrap().leading().unwrap().1, 3);
        let fifth = Polynomial::constant(q(), 1, BigRational::new(1.into(), 5.into()));
        assert!(matches!(fifth.reduce_mod(f5), Err(PolyError::BadReduction(..))));
    }

    #[test]
    fn json_roundtrip_is_canonical() {
        let f = p(&[(1, [2, 0, 1]), (-7, [0, 3, 0])]);
        let v = f.to_json();
        let back = Polynomial::from_json(q(), 3, &v).unwrap();
        assert_eq!(back, f);
        assert_eq!(serde_json::to_string(&v).unwrap(), serde_json::to_string(&back.to_json()).unwrap());
        assert!(Polynomial::from_json(q(), 2, &v).is_err());
    }

    #[test]
    fn display_reads_naturally() {
        let f = p(&[(1, [2, 0, 0]), (-1, [0, 1, 1]), (-3, [0, 0, 0])]);
        assert_eq!(f.to_string(), "x^2 - y*z - 3");
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial<Rationals>> {
        prop::collection::vec(
            (prop::collection::vec(0u32..4, 3), -5i64..=5),
            0..6,
        )
        .prop_map(|terms| {
            Polynomial::from_terms(
                Rationals,
                3,
                terms.into_iter().map(|(e, c)| (e, BigRational::from(num_bigint::BigInt::from(c)))),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ring_axioms(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            prop_assert_eq!(f.mul(&g), g.mul(&f));
            prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
            prop_assert_eq!(f.add(&g).mul(&h), f.mul(&h).add(&g.mul(&h)));
        }

        #[test]
        fn mixed_partials_commute(f in arb_poly()) {
            let xy = f.partial_derivative(0).partial_derivative(1);
            let yx = f.partial_derivative(1).partial_derivative(0);
            prop_assert_eq!(xy, yx);
        }

        #[test]
        fn division_undoes_multiplication(f in arb_poly(), g in arb_poly()) {
            prop_assume!(!g.is_zero());
            prop_assert_eq!(f.mul(&g).exact_divide(&g).unwrap(), f);
        }

        #[test]
        fn weighted_euler_identity(f in arb_poly(), ws in prop::collection::vec(1u64..4, 3)) {
            // For w-homogeneous f of degree d: sum_i w_i x_i df/dx_i = d f.
            let w = WeightedGrading::new(ws);
            let top = w.top_graded_part(&f);
            prop_assume!(!top.is_zero());
            let d = w.weighted_degree(&top).unwrap();
            let mut acc = Polynomial::zero(Rationals, 3);
            for i in 0..3 {
                let xi = Polynomial::var(Rationals, 3, i);
                let term = xi.mul(&top.partial_derivative(i));
                acc = acc.add(&term.scale(&BigRational::from(num_bigint::BigInt::from(
                    i64::try_from(w.weights[i]).unwrap(),
                ))));
            }
            prop_assert_eq!(acc, top.scale(&BigRational::from(num_bigint::BigInt::from(
                i64::try_from(d).unwrap(),
            ))));
        }
    }
}
