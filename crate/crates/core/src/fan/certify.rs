//! Projectivity certificates for complete simplicial fans.
//!
//! A complete fan is projective exactly when it carries a strictly
//! convex piecewise-linear support function: one linear piece per
//! maximal cone, agreeing on shared faces, and breaking strictly across
//! every wall.  Both directions are certified.  A feasible LP run
//! returns the pieces themselves ([`SupportFunction::verify`] rechecks
//! them geometrically); an infeasible run returns a Farkas refutation
//! that can be re-verified against [`projectivity_system`].

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::exactmath::{
    kernel_basis, lp_strict_feasible, FarkasRefutation, LinearForm, LpProblem, RatMatrix,
    StrictFeasibility,
};

use super::{Fan, FanError};

/// A piecewise-linear function on a complete fan, one linear piece per
/// maximal cone (in the fan's cone order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportFunction {
    pieces: Vec<Vec<BigRational>>,
}

#[derive(Debug, Clone)]
pub enum Projectivity {
    Certified(SupportFunction),
    NotProjective(FarkasRefutation),
}

impl SupportFunction {
    pub fn pieces(&self) -> &[Vec<BigRational>] {
        &self.pieces
    }

    /// Checks strict convexity directly against the fan: pieces agree on
    /// the rays of every wall and each piece beats its neighbour's piece
    /// strictly on the neighbour's remaining rays.
    pub fn verify(&self, fan: &Fan) -> bool {
        if self.pieces.len() != fan.max_cones().len() {
            return false;
        }
        if self.pieces.iter().any(|p| p.len() != fan.rank()) {
            return false;
        }
        for (ridge, a, b) in walls(fan) {
            let pa = &self.pieces[a];
            let pb = &self.pieces[b];
            for &i in &ridge {
                if dot(pa, fan, i) != dot(pb, fan, i) {
                    return false;
                }
            }
            // Strict break: on a ray of b not in the wall, b's own piece
            // is the larger one (and symmetrically for a).
            for &i in fan.max_cones()[b].ray_indices() {
                if !ridge.contains(&i) && dot(pb, fan, i) <= dot(pa, fan, i) {
                    return false;
                }
            }
            for &i in fan.max_cones()[a].ray_indices() {
                if !ridge.contains(&i) && dot(pa, fan, i) <= dot(pb, fan, i) {
                    return false;
                }
            }
        }
        true
    }
}

fn dot(piece: &[BigRational], fan: &Fan, ray: usize) -> BigRational {
    piece
        .iter()
        .zip(fan.rays()[ray].vector())
        .map(|(p, x)| p * BigRational::from(x.clone()))
        .sum()
}

/// Interior walls: ridges shared by exactly two maximal cones, with the
/// indices of those cones.
fn walls(fan: &Fan) -> Vec<(Vec<usize>, usize, usize)> {
    let mut ridge_cones: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, c) in fan.max_cones().iter().enumerate() {
        for ridge in c.ridges() {
            ridge_cones.entry(ridge).or_default().push(ci);
        }
    }
    ridge_cones
        .into_iter()
        .filter(|(_, cs)| cs.len() == 2)
        .map(|(ridge, cs)| (ridge, cs[0], cs[1]))
        .collect()
}

/// The wall constraints in the piece unknowns: per-wall equalities on
/// the shared rays (one form each, to be read as `= 0`) and the strict
/// forms saying the far cone's piece wins on its own rays.
fn wall_system(fan: &Fan) -> (usize, Vec<LinearForm>, Vec<LinearForm>) {
    let rank = fan.rank();
    let k = fan.max_cones().len();
    let num_vars = rank * (k - 1);
    // (piece_a - piece_b) . ray, as a linear form in the unknowns.
    let difference = |a: usize, b: usize, ray: usize| -> LinearForm {
        let mut coeffs = vec![BigRational::zero(); num_vars];
        let r = fan.rays()[ray].vector();
        if a > 0 {
            for (j, x) in r.iter().enumerate() {
                coeffs[(a - 1) * rank + j] += BigRational::from(x.clone());
            }
        }
        if b > 0 {
            for (j, x) in r.iter().enumerate() {
                coeffs[(b - 1) * rank + j] -= BigRational::from(x.clone());
            }
        }
        LinearForm::homogeneous(coeffs)
    };
    let mut equalities = Vec::new();
    let mut strict = Vec::new();
    for (ridge, a, b) in walls(fan) {
        for &i in &ridge {
            equalities.push(difference(a, b, i));
        }
        for &i in fan.max_cones()[b].ray_indices() {
            if !ridge.contains(&i) {
                strict.push(difference(b, a, i));
            }
        }
        for &i in fan.max_cones()[a].ray_indices() {
            if !ridge.contains(&i) {
                strict.push(difference(a, b, i));
            }
        }
    }
    (num_vars, equalities, strict)
}

/// The feasibility system whose strict solutions are exactly the
/// strictly convex support functions with the first piece pinned to
/// zero.
///
/// Variables are the linear pieces of cones `1..K` (the piece of cone 0
/// is fixed at zero, harmless because adding a global linear function
/// changes no convexity relation).  For each wall the system carries
/// equalities on the shared rays, expanded into opposite weak pairs,
/// and, in both directions, the strict inequality that the far cone's
/// piece wins on its own rays.
pub fn projectivity_system(fan: &Fan) -> Result<LpProblem, FanError> {
    if !fan.is_validated() {
        return Err(FanError::Unvalidated);
    }
    if !fan.is_complete()? {
        return Err(FanError::NotComplete);
    }
    let (num_vars, equalities, strict) = wall_system(fan);
    let mut weak = Vec::with_capacity(2 * equalities.len());
    for e in equalities {
        weak.push(LinearForm::homogeneous(e.coeffs.iter().map(|x| -x).collect()));
        weak.push(e);
    }
    Ok(LpProblem { num_vars, strict, weak })
}

fn inner(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the wall equalities exactly and runs the strict search in
/// their kernel, whose dimension is far below the raw unknown count.
/// Returns the verified pieces when the fan is projective, `None`
/// otherwise.
fn certify_in_wall_kernel(fan: &Fan) -> Option<SupportFunction> {
    let (num_vars, equalities, strict) = wall_system(fan);
    if num_vars == 0 || strict.is_empty() || equalities.is_empty() {
        return None;
    }
    let rows: Vec<Vec<BigRational>> = equalities.into_iter().map(|f| f.coeffs).collect();
    let basis = kernel_basis(&RatMatrix::from_rows(&rows));
    if basis.is_empty() {
        return None;
    }
    let reduced = LpProblem {
        num_vars: basis.len(),
        strict: strict
            .iter()
            .map(|s| LinearForm::homogeneous(basis.iter().map(|n| inner(&s.coeffs, n)).collect()))
            .collect(),
        weak: Vec::new(),
    };
    match lp_strict_feasible(&reduced) {
        StrictFeasibility::Feasible { witness: t } => {
            let rank = fan.rank();
            let mut x = vec![BigRational::zero(); num_vars];
            for (tj, n) in t.iter().zip(&basis) {
                for (xi, ni) in x.iter_mut().zip(n) {
                    *xi += tj * ni;
                }
            }
            let mut pieces = vec![vec![BigRational::zero(); rank]];
            for c in 1..fan.max_cones().len() {
                pieces.push(x[(c - 1) * rank..c * rank].to_vec());
            }
            let support = SupportFunction { pieces };
            assert!(
                support.verify(fan),
                "a point of the reduced wall system must give a strictly convex function"
            );
            Some(support)
        }
        StrictFeasibility::Infeasible { .. } => None,
    }
}

/// Searches for a strictly convex support function on a validated
/// complete fan.  Feasible runs hand back verified pieces; infeasible
/// runs hand back the refutation of the wall system, which is a proof
/// that no strictly convex support function exists.
///
/// The search first runs inside the exact solution space of the wall
/// equalities, which is much smaller; a negative answer falls back to
/// the full system so that the refutation certifies the original
/// constraints.
pub fn certify_projective(fan: &Fan) -> Result<Projectivity, FanError> {
    let problem = projectivity_system(fan)?;
    if let Some(support) = certify_in_wall_kernel(fan) {
        debug_assert!(support.verify(fan));
        return Ok(Projectivity::Certified(support));
    }
    match lp_strict_feasible(&problem) {
        StrictFeasibility::Feasible { witness } => {
            let rank = fan.rank();
            let mut pieces = vec![vec![BigRational::zero(); rank]];
            for c in 1..fan.max_cones().len() {
                pieces.push(witness[(c - 1) * rank..c * rank].to_vec());
            }
            let support = SupportFunction { pieces };
            assert!(
                support.verify(fan),
                "a feasible wall system must give a strictly convex function"
            );
            Ok(Projectivity::Certified(support))
        }
        StrictFeasibility::Infeasible { refutation } => {
            assert!(refutation.verify(&problem));
            Ok(Projectivity::NotProjective(refutation))
        }
    }
}
