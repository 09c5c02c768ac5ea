use num_rational::BigRational;
use num_traits::Zero;

use super::simplex::{maximize, Constraint, Sense, SimplexOutcome};

/// Affine form `coeffs . u + constant` over unrestricted variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
}

impl LinearForm {
    pub fn new(coeffs: Vec<BigRational>, constant: BigRational) -> Self {
        LinearForm { coeffs, constant }
    }

    pub fn homogeneous(coeffs: Vec<BigRational>) -> Self {
        LinearForm { coeffs, constant: BigRational::zero() }
    }

    pub fn eval(&self, u: &[BigRational]) -> BigRational {
        assert_eq!(u.len(), self.coeffs.len(), "point has wrong dimension");
        let mut acc = self.constant.clone();
        for (c, x) in self.coeffs.iter().zip(u) {
            acc += c * x;
        }
        acc
    }
}

/// Feasibility query: does some `u` satisfy every `strict` form with
/// `> 0` and every `weak` form with `>= 0`?  Variables are free.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub num_vars: usize,
    pub strict: Vec<LinearForm>,
    pub weak: Vec<LinearForm>,
}

/// Nonnegative combination of the constraints whose linear part cancels
/// while the constant term stays nonpositive; its existence refutes
/// strict feasibility.
#[derive(Debug, Clone)]
pub struct FarkasRefutation {
    pub strict_multipliers: Vec<BigRational>,
    pub weak_multipliers: Vec<BigRational>,
}

impl FarkasRefutation {
    /// Checks the certificate against the problem it claims to refute.
    ///
    /// If some `u` satisfied the system, the combination would evaluate
    /// to a positive number (strict multiplier used) or a nonnegative
    /// one, yet it identically equals a constant `<= 0`, respectively
    /// `< 0`.  So a passing check proves infeasibility.
    pub fn verify(&self, problem: &LpProblem) -> bool {
        if self.strict_multipliers.len() != problem.strict.len()
            || self.weak_multipliers.len() != problem.weak.len()
        {
            return false;
        }
        let all = self.strict_multipliers.iter().chain(&self.weak_multipliers);
        if all.clone().any(|y| *y < BigRational::zero()) {
            return false;
        }
        let forms = problem.strict.iter().chain(&problem.weak);
        let mut lin = vec![BigRational::zero(); problem.num_vars];
        let mut constant = BigRational::zero();
        for (y, form) in all.zip(forms) {
            for (acc, c) in lin.iter_mut().zip(&form.coeffs) {
                *acc += y * c;
            }
            constant += y * &form.constant;
        }
        if lin.iter().any(|c| !c.is_zero()) || constant > BigRational::zero() {
            return false;
        }
        let strict_total: BigRational = self.strict_multipliers.iter().sum();
        strict_total > BigRational::zero() || constant < BigRational::zero()
    }
}

#[derive(Debug, Clone)]
pub enum StrictFeasibility {
    Feasible { witness: Vec<BigRational> },
    Infeasible { refutation: FarkasRefutation },
}

fn one() -> BigRational {
    BigRational::from_integer(1.into())
}

/// Decides strict feasibility exactly.
///
/// The search maximizes a slack `eps` subject to `strict_i(u) >= eps`,
/// `weak_j(u) >= 0` and `eps <= 1`, with `u` split into differences of
/// nonnegative parts.  The optimum is positive exactly when a strict
/// solution exists.  On failure the refutation multipliers are found by
/// a second feasibility problem and re-verified before being returned.
pub fn lp_strict_feasible(problem: &LpProblem) -> StrictFeasibility {
    let n = problem.num_vars;
    for form in problem.strict.iter().chain(&problem.weak) {
        assert_eq!(form.coeffs.len(), n, "form has wrong dimension");
    }
    // Variables: u+ (n), u- (n), eps (1).
    let nv = 2 * n + 1;
    let mut cons = Vec::new();
    for form in &problem.strict {
        let mut coeffs = Vec::with_capacity(nv);
        coeffs.extend(form.coeffs.iter().cloned());
        coeffs.extend(form.coeffs.iter().map(|c| -c.clone()));
        coeffs.push(-one());
        cons.push(Constraint { coeffs, sense: Sense::Ge, rhs: -form.constant.clone() });
    }
    for form in &problem.weak {
        let mut coeffs = Vec::with_capacity(nv);
        coeffs.extend(form.coeffs.iter().cloned());
        coeffs.extend(form.coeffs.iter().map(|c| -c.clone()));
        coeffs.push(BigRational::zero());
        cons.push(Constraint { coeffs, sense: Sense::Ge, rhs: -form.constant.clone() });
    }
    let mut cap = vec![BigRational::zero(); nv];
    cap[2 * n] = one();
    cons.push(Constraint { coeffs: cap.clone(), sense: Sense::Le, rhs: one() });

    match maximize(nv, &cons, &cap) {
        SimplexOutcome::Optimal { value, point } if value > BigRational::zero() => {
            let witness: Vec<BigRational> =
                (0..n).map(|i| &point[i] - &point[n + i]).collect();
            let forms = || problem.strict.iter().chain(&problem.weak);
            assert!(problem.strict.iter().all(|f| f.eval(&witness) > BigRational::zero()));
            assert!(problem.weak.iter().all(|f| f.eval(&witness) >= BigRational::zero()));
            // A homogeneous system is scale-invariant; check the doubled
            // witness too, as a cheap guard on the arithmetic.
            if forms().all(|f| f.constant.is_zero()) {
                let doubled: Vec<BigRational> =
                    witness.iter().map(|x| x + x).collect();
                assert!(problem.strict.iter().all(|f| f.eval(&doubled) > BigRational::zero()));
            }
            StrictFeasibility::Feasible { witness }
        }
        SimplexOutcome::Optimal { .. } | SimplexOutcome::Infeasible => {
            let refutation = find_refutation(problem)
                .expect("a strictly infeasible system must admit a refutation");
            assert!(refutation.verify(problem), "refutation failed its own check");
            StrictFeasibility::Infeasible { refutation }
        }
        SimplexOutcome::Unbounded { .. } => {
            unreachable!("the slack objective is capped at 1, so the program is bounded")
        }
    }
}

/// Searches for nonnegative multipliers cancelling the linear parts.
/// Two shapes cover all ways strict feasibility can fail: some strict
/// multiplier is forced positive (sum pinned to 1, constant `<= 0`), or
/// the weak system alone is contradictory (constant pinned to -1).
fn find_refutation(problem: &LpProblem) -> Option<FarkasRefutation> {
    let m = problem.strict.len();
    let k = problem.weak.len();
    let nv = m + k;
    let forms: Vec<&LinearForm> = problem.strict.iter().chain(&problem.weak).collect();

    let cancel: Vec<Constraint> = (0..problem.num_vars)
        .map(|v| Constraint {
            coeffs: forms.iter().map(|f| f.coeffs[v].clone()).collect(),
            sense: Sense::Eq,
            rhs: BigRational::zero(),
        })
        .collect();
    let constants: Vec<BigRational> = forms.iter().map(|f| f.constant.clone()).collect();

    let extract = |point: Vec<BigRational>| FarkasRefutation {
        strict_multipliers: point[..m].to_vec(),
        weak_multipliers: point[m..m + k].to_vec(),
    };

    if m > 0 {
        let mut cons = cancel.clone();
        cons.push(Constraint {
            coeffs: constants.clone(),
            sense: Sense::Le,
            rhs: BigRational::zero(),
        });
        let mut pick = vec![BigRational::zero(); nv];
        for c in pick.iter_mut().take(m) {
            *c = one();
        }
        cons.push(Constraint { coeffs: pick, sense: Sense::Eq, rhs: one() });
        if let SimplexOutcome::Optimal { point, .. } =
            maximize(nv, &cons, &vec![BigRational::zero(); nv])
        {
            return Some(extract(point));
        }
    }

    let mut cons = cancel;
    cons.push(Constraint { coeffs: constants, sense: Sense::Eq, rhs: -one() });
    match maximize(nv, &cons, &vec![BigRational::zero(); nv]) {
        SimplexOutcome::Optimal { point, .. } => Some(extract(point)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn form(coeffs: Vec<i64>, constant: i64) -> LinearForm {
        LinearForm::new(coeffs.into_iter().map(rat).collect(), rat(constant))
    }

    #[test]
    fn open_interval_has_witness() {
        // 0 < u < 2
        let p = LpProblem {
            num_vars: 1,
            strict: vec![form(vec![1], 0), form(vec![-1], 2)],
            weak: vec![],
        };
        match lp_strict_feasible(&p) {
            StrictFeasibility::Feasible { witness } => {
                assert!(witness[0] > rat(0) && witness[0] < rat(2));
            }
            _ => panic!("expected a witness"),
        }
    }

    #[test]
    fn opposite_strict_signs_refuted() {
        let p = LpProblem {
            num_vars: 1,
            strict: vec![form(vec![1], 0), form(vec![-1], 0)],
            weak: vec![],
        };
        match lp_strict_feasible(&p) {
            StrictFeasibility::Infeasible { refutation } => assert!(refutation.verify(&p)),
            _ => panic!("expected a refutation"),
        }
    }

    #[test]
    fn weak_contradiction_refuted_without_strict_rows() {
        // u >= 1 and -u >= 0 cannot hold together.
        let p = LpProblem {
            num_vars: 1,
            strict: vec![],
            weak: vec![form(vec![1], -1), form(vec![-1], 0)],
        };
        match lp_strict_feasible(&p) {
            StrictFeasibility::Infeasible { refutation } => {
                assert!(refutation.verify(&p));
                assert!(refutation.strict_multipliers.is_empty());
            }
            _ => panic!("expected a refutation"),
        }
    }

    #[test]
    fn positive_span_of_plane_is_refuted() {
        // u.(1,0) > 0, u.(0,1) > 0, u.(-1,-1) > 0 sum to zero.
        let p = LpProblem {
            num_vars: 2,
            strict: vec![form(vec![1, 0], 0), form(vec![0, 1], 0), form(vec![-1, -1], 0)],
            weak: vec![],
        };
        match lp_strict_feasible(&p) {
            StrictFeasibility::Infeasible { refutation } => assert!(refutation.verify(&p)),
            _ => panic!("expected a refutation"),
        }
    }

    #[test]
    fn separating_functional_in_the_plane() {
        // u.(1,0) > 0, u.(1,1) > 0, u.(0,-1) >= 0.
        let p = LpProblem {
            num_vars: 2,
            strict: vec![form(vec![1, 0], 0), form(vec![1, 1], 0)],
            weak: vec![form(vec![0, -1], 0)],
        };
        match lp_strict_feasible(&p) {
            StrictFeasibility::Feasible { witness } => {
                assert!(witness[0] > rat(0));
                assert!(&witness[0] + &witness[1] > rat(0));
                assert!(witness[1] <= rat(0));
            }
            _ => panic!("expected a witness"),
        }
    }

    #[test]
    fn tampered_refutation_fails_verification() {
        let p = LpProblem {
            num_vars: 1,
            strict: vec![form(vec![1], 0), form(vec![-1], 0)],
            weak: vec![],
        };
        let StrictFeasibility::Infeasible { mut refutation } = lp_strict_feasible(&p) else {
            panic!("expected a refutation");
        };
        refutation.strict_multipliers[0] += rat(1);
        assert!(!refutation.verify(&p));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn answer_always_carries_its_own_proof(
            strict in prop::collection::vec(
                (prop::collection::vec(-3i64..=3, 2), -2i64..=2), 0..4),
            weak in prop::collection::vec(
                (prop::collection::vec(-3i64..=3, 2), -2i64..=2), 0..3),
        ) {
            let p = LpProblem {
                num_vars: 2,
                strict: strict.into_iter().map(|(c, k)| form(c, k)).collect(),
                weak: weak.into_iter().map(|(c, k)| form(c, k)).collect(),
            };
            match lp_strict_feasible(&p) {
                StrictFeasibility::Feasible { witness } => {
                    prop_assert!(p.strict.iter().all(|f| f.eval(&witness) > rat(0)));
                    prop_assert!(p.weak.iter().all(|f| f.eval(&witness) >= rat(0)));
                }
                StrictFeasibility::Infeasible { refutation } => {
                    prop_assert!(refutation.verify(&p));
                }
            }
        }
    }
}
