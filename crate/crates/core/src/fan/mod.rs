//! Simplicial rational fans.
//!
//! A [`Fan`] stores primitive rays and maximal cones as index sets.  The
//! expensive part of being a fan, that any two cones meet along a common
//! face, is decided exactly: for each pair of maximal cones an LP
//! searches for a linear functional vanishing on the shared rays and
//! strictly separating the rest.  Such a functional exists precisely
//! when the intersection is the face spanned by the shared rays, so both
//! the pass and the fail direction of validation are proofs.
//!
//! Completeness is decided combinatorially (every ridge of a
//! full-dimensional fan must lie in exactly two maximal cones, with a
//! connected adjacency graph), projectivity via a strictly convex
//! support function found, or refuted, by the exact simplex.

mod certify;
mod fixtures;
mod project;

pub use certify::{certify_projective, projectivity_system, Projectivity, SupportFunction};
pub use fixtures::{
    fan_hirzebruch, fan_nonprojective_cube, fan_octant, fan_p1xp1, fan_p2,
};
pub use project::{project_fan, LatticeProjection};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{
    lp_strict_feasible, rank_rat, snf, solve_independent_columns, IntMatrix, LinearForm,
    LpProblem, RatMatrix, StrictFeasibility,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("zero vector cannot span a ray")]
    ZeroVector,
    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(String),
    #[error("ray {ray} has {got} coordinates, fan has rank {rank}")]
    WrongDimension { ray: String, got: usize, rank: usize },
    #[error("duplicate ray {0}")]
    DuplicateRay(String),
    #[error("cone references ray index {0} but there are only {1} rays")]
    RayIndexOutOfRange(usize, usize),
    #[error("maximal cone has no rays")]
    EmptyCone,
    #[error("cone {0} has linearly dependent rays")]
    NonSimplicialCone(String),
    #[error("cone {inner} is contained in cone {outer}")]
    ConeContained { inner: String, outer: String },
    #[error("ray {0} lies in no maximal cone")]
    UnusedRay(String),
    #[error("cones {0} and {1} do not intersect in a common face")]
    IntersectionNotFace(String, String),
    #[error("fan has not passed face-intersection validation")]
    Unvalidated,
    #[error("fan is not complete")]
    NotComplete,
    #[error("ray {0} is already in the fan")]
    RayAlreadyPresent(String),
    #[error("ray {0} lies outside the support of the fan")]
    RayOutsideSupport(String),
    #[error("kernel vector is not primitive")]
    NonPrimitiveKernel,
    #[error("ray {0} spans the projection kernel and may not appear upstairs")]
    KernelRayInGamma(String),
    #[error("downstairs ray set mismatch: {0}")]
    DownstairsMismatch(String),
    #[error("cone {0} is not a maximal cone of the fan")]
    ConeNotInFan(String),
    #[error("bad input: {0}")]
    InvalidInput(String),
    #[error("malformed fan data: {0}")]
    BadFormat(String),
}

fn fmt_ints(v: &[BigInt]) -> String {
    let body: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", body.join(", "))
}

fn fmt_indices(c: &[usize]) -> String {
    let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", body.join(", "))
}

/// A primitive integer vector (the gcd of its entries is 1).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ray {
    vector: Vec<BigInt>,
}

impl Ray {
    /// Requires the input to already be primitive.
    pub fn new(vector: Vec<BigInt>) -> Result<Ray, FanError> {
        let c = content(&vector);
        if c.is_zero() {
            return Err(FanError::ZeroVector);
        }
        if !c.is_one() {
            return Err(FanError::NonPrimitiveRay(fmt_ints(&vector)));
        }
        Ok(Ray { vector })
    }

    /// Divides out the content, so any nonzero vector is accepted.
    pub fn primitive(vector: Vec<BigInt>) -> Result<Ray, FanError> {
        let c = content(&vector);
        if c.is_zero() {
            return Err(FanError::ZeroVector);
        }
        Ok(Ray { vector: vector.into_iter().map(|x| x / &c).collect() })
    }

    pub fn from_ints(v: &[i64]) -> Result<Ray, FanError> {
        Ray::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn vector(&self) -> &[BigInt] {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn negated(&self) -> Ray {
        Ray { vector: self.vector.iter().map(|x| -x).collect() }
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_ints(&self.vector))
    }
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// A simplicial cone, stored as the sorted set of its ray indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    ray_indices: Vec<usize>,
}

impl Cone {
    pub fn new(mut ray_indices: Vec<usize>) -> Cone {
        ray_indices.sort_unstable();
        ray_indices.dedup();
        Cone { ray_indices }
    }

    pub fn ray_indices(&self) -> &[usize] {
        &self.ray_indices
    }

    pub fn len(&self) -> usize {
        self.ray_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ray_indices.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.ray_indices.binary_search(&idx).is_ok()
    }

    fn is_subset_of(&self, other: &Cone) -> bool {
        self.ray_indices.iter().all(|i| other.contains(*i))
    }

    /// The codimension-one faces: drop one ray at a time.
    fn ridges(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.ray_indices.len()).map(move |skip| {
            self.ray_indices
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &i)| i)
                .collect()
        })
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_indices(&self.ray_indices))
    }
}

#[derive(Debug, Clone)]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<Ray>,
    max_cones: Vec<Cone>,
    validated: bool,
}

/// Builds a fan from primitive rays and maximal-cone index sets.
///
/// Structural requirements (distinct primitive rays of the right
/// dimension, simplicial cones, no cone contained in another, no unused
/// ray) are always enforced.  The pairwise face-intersection property is
/// verified when the number of cone pairs fits within
/// `validate_budget`; otherwise the fan is returned unvalidated and can
/// be revalidated later with a larger budget.
pub fn make_fan(
    rank: usize,
    rays: Vec<Ray>,
    max_cones: Vec<Vec<usize>>,
    validate_budget: u64,
) -> Result<Fan, FanError> {
    let cones: Vec<Cone> = max_cones.into_iter().map(Cone::new).collect();
    structural_checks(rank, &rays, &cones)?;
    let mut fan = Fan { ambient_rank: rank, rays, max_cones: cones, validated: false };
    fan.revalidate(validate_budget)?;
    Ok(fan)
}

fn structural_checks(rank: usize, rays: &[Ray], cones: &[Cone]) -> Result<(), FanError> {
    for r in rays {
        if r.dim() != rank {
            return Err(FanError::WrongDimension { ray: r.to_string(), got: r.dim(), rank });
        }
    }
    let mut seen = BTreeSet::new();
    for r in rays {
        if !seen.insert(r.vector.clone()) {
            return Err(FanError::DuplicateRay(r.to_string()));
        }
    }
    let mut used = vec![false; rays.len()];
    for c in cones {
        if c.is_empty() {
            return Err(FanError::EmptyCone);
        }
        for &i in c.ray_indices() {
            if i >= rays.len() {
                return Err(FanError::RayIndexOutOfRange(i, rays.len()));
            }
            used[i] = true;
        }
        let m = ray_matrix(rays, c.ray_indices());
        if rank_rat(&m) != c.len() {
            return Err(FanError::NonSimplicialCone(c.to_string()));
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        if !cones.is_empty() || !rays.is_empty() {
            return Err(FanError::UnusedRay(rays[i].to_string()));
        }
    }
    for (i, a) in cones.iter().enumerate() {
        for b in cones.iter().skip(i + 1) {
            if a.is_subset_of(b) {
                return Err(FanError::ConeContained { inner: a.to_string(), outer: b.to_string() });
            }
            if b.is_subset_of(a) {
                return Err(FanError::ConeContained { inner: b.to_string(), outer: a.to_string() });
            }
        }
    }
    Ok(())
}

/// Rays as the rows of a rational matrix.
fn ray_matrix(rays: &[Ray], indices: &[usize]) -> RatMatrix {
    let cols = if indices.is_empty() { 0 } else { rays[indices[0]].dim() };
    let mut m = RatMatrix::zero(indices.len(), cols);
    for (r, &i) in indices.iter().enumerate() {
        for (c, x) in rays[i].vector().iter().enumerate() {
            m.set(r, c, BigRational::from(x.clone()));
        }
    }
    m
}

/// Rays as the columns of a rational matrix.
fn ray_column_matrix(rays: &[Ray], indices: &[usize], rank: usize) -> RatMatrix {
    let mut m = RatMatrix::zero(rank, indices.len());
    for (c, &i) in indices.iter().enumerate() {
        for (r, x) in rays[i].vector().iter().enumerate() {
            m.set(r, c, BigRational::from(x.clone()));
        }
    }
    m
}

impl Fan {
    pub(crate) fn from_parts(
        ambient_rank: usize,
        rays: Vec<Ray>,
        max_cones: Vec<Cone>,
        validated: bool,
    ) -> Fan {
        debug_assert!(structural_checks(ambient_rank, &rays, &max_cones).is_ok());
        Fan { ambient_rank, rays, max_cones, validated }
    }

    pub fn rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn ray_index(&self, ray: &Ray) -> Option<usize> {
        self.rays.iter().position(|r| r == ray)
    }

    /// Runs the pairwise face-intersection check when the pair count
    /// fits in `budget`.  Returns whether the check ran; a violation is
    /// an error.
    pub fn revalidate(&mut self, budget: u64) -> Result<bool, FanError> {
        let k = self.max_cones.len() as u64;
        let pairs = k.saturating_mul(k.saturating_sub(1)) / 2;
        if pairs > budget {
            return Ok(false);
        }
        for (i, a) in self.max_cones.iter().enumerate() {
            for b in self.max_cones.iter().skip(i + 1) {
                check_pair_is_face(self.ambient_rank, &self.rays, a, b)?;
            }
        }
        self.validated = true;
        Ok(true)
    }

    /// Expands `point` in the rays of `cone`; `None` when the point is
    /// outside the cone's span or has a negative coefficient.
    fn cone_coefficients(&self, cone: &Cone, point: &[BigInt]) -> Option<Vec<BigRational>> {
        let m = ray_column_matrix(&self.rays, cone.ray_indices(), self.ambient_rank);
        let b: Vec<BigRational> = point.iter().map(|x| BigRational::from(x.clone())).collect();
        let lambda = solve_independent_columns(&m, &b)?;
        lambda.iter().all(|x| !x.is_negative()).then_some(lambda)
    }

    /// Ridge-pairing test: a validated fan whose maximal cones are all
    /// full-dimensional is complete exactly when every ridge lies in two
    /// maximal cones and the adjacency graph is connected.
    pub fn is_complete(&self) -> Result<bool, FanError> {
        if !self.validated {
            return Err(FanError::Unvalidated);
        }
        if self.max_cones.is_empty() {
            return Ok(false);
        }
        if self.max_cones.iter().any(|c| c.len() != self.ambient_rank) {
            return Ok(false);
        }
        let mut ridge_cones: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, c) in self.max_cones.iter().enumerate() {
            for ridge in c.ridges() {
                ridge_cones.entry(ridge).or_default().push(ci);
            }
        }
        if ridge_cones.values().any(|v| v.len() != 2) {
            return Ok(false);
        }
        // Breadth-first walk over ridge adjacency.
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.max_cones.len()];
        for pair in ridge_cones.values() {
            adj[pair[0]].push(pair[1]);
            adj[pair[1]].push(pair[0]);
        }
        let mut seen = vec![false; self.max_cones.len()];
        let mut queue = vec![0usize];
        seen[0] = true;
        while let Some(c) = queue.pop() {
            for &n in &adj[c] {
                if !seen[n] {
                    seen[n] = true;
                    queue.push(n);
                }
            }
        }
        Ok(seen.into_iter().all(|s| s))
    }

    /// Index of the sublattice spanned by the cone's rays inside the
    /// saturation of their span: the product of the nonzero elementary
    /// divisors of the ray matrix.
    pub fn cone_multiplicity(&self, cone: &Cone) -> Result<BigInt, FanError> {
        for &i in cone.ray_indices() {
            if i >= self.rays.len() {
                return Err(FanError::RayIndexOutOfRange(i, self.rays.len()));
            }
        }
        let mut m = IntMatrix::zero(cone.len(), self.ambient_rank);
        for (r, &i) in cone.ray_indices().iter().enumerate() {
            for (c, x) in self.rays[i].vector().iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        let d = snf(&m);
        let nonzero: Vec<BigInt> = d.divisors().into_iter().filter(|x| !x.is_zero()).collect();
        if nonzero.len() != cone.len() {
            return Err(FanError::NonSimplicialCone(cone.to_string()));
        }
        Ok(nonzero.into_iter().product())
    }

    /// Intersection number of the invariant curve of the ridge `tau`
    /// with the divisor of the distinguished ray: mult(tau) / mult(tau +
    /// ray).  The joined cone must be a maximal cone of the fan.
    pub fn toric_intersection_d0(
        &self,
        tau: &[usize],
        r0_index: usize,
    ) -> Result<BigRational, FanError> {
        if tau.contains(&r0_index) {
            return Err(FanError::InvalidInput(format!(
                "ridge {} already contains ray index {}",
                fmt_indices(tau),
                r0_index
            )));
        }
        let tau_cone = Cone::new(tau.to_vec());
        let mut joined = tau.to_vec();
        joined.push(r0_index);
        let sigma = Cone::new(joined);
        if !self.max_cones.contains(&sigma) {
            return Err(FanError::ConeNotInFan(sigma.to_string()));
        }
        let mt = self.cone_multiplicity(&tau_cone)?;
        let ms = self.cone_multiplicity(&sigma)?;
        Ok(BigRational::new(mt, ms))
    }

    /// Refines the fan by inserting `r`: each maximal cone containing
    /// `r` is replaced by the joins of `r` with its facets not
    /// containing `r`.
    ///
    /// Subdividing a valid fan yields a valid fan, so the validation
    /// flag carries over; the property tests re-verify this from scratch
    /// on random subdivision sequences.
    pub fn star_subdivision(&self, r: &Ray) -> Result<Fan, FanError> {
        if r.dim() != self.ambient_rank {
            return Err(FanError::WrongDimension {
                ray: r.to_string(),
                got: r.dim(),
                rank: self.ambient_rank,
            });
        }
        if self.ray_index(r).is_some() {
            return Err(FanError::RayAlreadyPresent(r.to_string()));
        }
        let new_index = self.rays.len();
        let mut out: BTreeSet<Cone> = BTreeSet::new();
        let mut hit = false;
        for cone in &self.max_cones {
            match self.cone_coefficients(cone, r.vector()) {
                None => {
                    out.insert(cone.clone());
                }
                Some(lambda) => {
                    hit = true;
                    for (k, l) in lambda.iter().enumerate() {
                        if l.is_zero() {
                            continue;
                        }
                        let replaced: Vec<usize> = cone
                            .ray_indices()
                            .iter()
                            .enumerate()
                            .map(|(j, &i)| if j == k { new_index } else { i })
                            .collect();
                        out.insert(Cone::new(replaced));
                    }
                }
            }
        }
        if !hit {
            return Err(FanError::RayOutsideSupport(r.to_string()));
        }
        let mut rays = self.rays.clone();
        rays.push(r.clone());
        Ok(Fan::from_parts(self.ambient_rank, rays, out.into_iter().collect(), self.validated))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let data = FanData {
            rank: self.ambient_rank,
            rays: self
                .rays
                .iter()
                .map(|r| {
                    r.vector()
                        .iter()
                        .map(|x| i64::try_from(x).expect("fixture rays fit in i64"))
                        .collect()
                })
                .collect(),
            max_cones: self.max_cones.iter().map(|c| c.ray_indices().to_vec()).collect(),
        };
        serde_json::to_value(data).expect("fan data serializes")
    }

    pub fn from_json(value: &serde_json::Value, validate_budget: u64) -> Result<Fan, FanError> {
        let data: FanData = serde_json::from_value(value.clone())
            .map_err(|e| FanError::BadFormat(e.to_string()))?;
        let rays = data
            .rays
            .into_iter()
            .map(|v| Ray::new(v.into_iter().map(BigInt::from).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        make_fan(data.rank, rays, data.max_cones, validate_budget)
    }
}

#[derive(Serialize, Deserialize)]
struct FanData {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

/// Decides whether two simplicial cones meet in the common face spanned
/// by their shared rays.
///
/// The LP looks for a functional `u` with `u = 0` on every shared ray,
/// `u > 0` on the remaining rays of `a` and `u < 0` on those of `b`.
/// When it exists, the cones lie in opposite closed half-spaces and
/// their intersection is pinched to the shared face; when the LP is
/// infeasible the separation theorem for polyhedral cones says the
/// intersection is strictly larger, so the pair is reported as a
/// violation.
fn check_pair_is_face(rank: usize, rays: &[Ray], a: &Cone, b: &Cone) -> Result<(), FanError> {
    let common: Vec<usize> =
        a.ray_indices().iter().copied().filter(|i| b.contains(*i)).collect();
    let form = |i: usize, sign: i64| -> LinearForm {
        LinearForm::homogeneous(
            rays[i]
                .vector()
                .iter()
                .map(|x| BigRational::from(x * sign))
                .collect(),
        )
    };
    let mut strict = Vec::new();
    for &i in a.ray_indices() {
        if !common.contains(&i) {
            strict.push(form(i, 1));
        }
    }
    for &i in b.ray_indices() {
        if !common.contains(&i) {
            strict.push(form(i, -1));
        }
    }
    let mut weak = Vec::new();
    for &i in &common {
        weak.push(form(i, 1));
        weak.push(form(i, -1));
    }
    let problem = LpProblem { num_vars: rank, strict, weak };
    match lp_strict_feasible(&problem) {
        StrictFeasibility::Feasible { .. } => Ok(()),
        StrictFeasibility::Infeasible { .. } => {
            Err(FanError::IntersectionNotFace(a.to_string(), b.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rays(vs: &[&[i64]]) -> Vec<Ray> {
        vs.iter().map(|v| Ray::from_ints(v).unwrap()).collect()
    }

    #[test]
    fn ray_primitivity_rules() {
        assert!(Ray::from_ints(&[2, 0]).is_err());
        assert!(Ray::from_ints(&[0, 0]).is_err());
        assert_eq!(Ray::primitive(vec![BigInt::from(4), BigInt::from(6)]).unwrap(),
            Ray::from_ints(&[2, 3]).unwrap());
        assert_eq!(
            Ray::primitive(vec![BigInt::from(-4), BigInt::from(-6)]).unwrap(),
            Ray::from_ints(&[-2, -3]).unwrap()
        );
    }

    #[test]
    fn textbook_plane_fan_is_valid_and_complete() {
        let f = fan_p2();
        assert!(f.is_validated());
        assert!(f.is_complete().unwrap());
        assert!(fan_p1xp1().is_complete().unwrap());
    }

    #[test]
    fn octant_is_valid_but_not_complete() {
        let f = fan_octant();
        assert!(f.is_validated());
        assert!(!f.is_complete().unwrap());
    }

    #[test]
    fn construction_error_paths() {
        // Non-primitive ray.
        assert!(matches!(Ray::from_ints(&[2, 0]), Err(FanError::NonPrimitiveRay(_))));
        // Dependent rays in a cone.
        let r = rays(&[&[1, 0], &[-1, 0]]);
        assert!(matches!(
            make_fan(2, r, vec![vec![0, 1]], u64::MAX),
            Err(FanError::NonSimplicialCone(_))
        ));
        // Duplicate rays.
        let r = rays(&[&[1, 0], &[1, 0]]);
        assert!(matches!(
            make_fan(2, r, vec![vec![0], vec![1]], u64::MAX),
            Err(FanError::DuplicateRay(_))
        ));
        // Unused ray.
        let r = rays(&[&[1, 0], &[0, 1]]);
        assert!(matches!(make_fan(2, r, vec![vec![0]], u64::MAX), Err(FanError::UnusedRay(_))));
        // Contained cone.
        let r = rays(&[&[1, 0], &[0, 1]]);
        assert!(matches!(
            make_fan(2, r, vec![vec![0], vec![0, 1]], u64::MAX),
            Err(FanError::ConeContained { .. })
        ));
    }

    #[test]
    fn overlapping_cones_are_rejected() {
        // <e1, e2> and <e1, e1+e2> overlap in a 2-dimensional set.
        let r = rays(&[&[1, 0], &[0, 1], &[1, 1]]);
        let err = make_fan(2, r, vec![vec![0, 1], vec![0, 2]], u64::MAX);
        assert!(matches!(err, Err(FanError::IntersectionNotFace(..))));
    }

    #[test]
    fn budget_defers_validation() {
        let r = rays(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let mut f = make_fan(2, r, vec![vec![0, 1], vec![1, 2], vec![2, 0]], 0).unwrap();
        assert!(!f.is_validated());
        assert!(matches!(f.is_complete(), Err(FanError::Unvalidated)));
        assert!(f.revalidate(100).unwrap());
        assert!(f.is_complete().unwrap());
    }

    #[test]
    fn star_subdivision_of_plane_fan() {
        let f = fan_p2();
        let g = f.star_subdivision(&Ray::from_ints(&[1, 1]).unwrap()).unwrap();
        assert_eq!(g.max_cones().len(), 4);
        assert!(g.is_complete().unwrap());
        // Already present and outside-support errors.
        assert!(matches!(
            f.star_subdivision(&Ray::from_ints(&[1, 0]).unwrap()),
            Err(FanError::RayAlreadyPresent(_))
        ));
        let octant = fan_octant();
        assert!(matches!(
            octant.star_subdivision(&Ray::from_ints(&[-1, 0, 0]).unwrap()),
            Err(FanError::RayOutsideSupport(_))
        ));
    }

    #[test]
    fn star_subdivision_of_octant_at_barycenter() {
        let f = fan_octant();
        let g = f.star_subdivision(&Ray::from_ints(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(g.max_cones().len(), 3);
        assert!(g.is_validated());
        for c in g.max_cones() {
            assert!(c.contains(3));
        }
    }

    #[test]
    fn multiplicities() {
        let r = rays(&[&[1, 1], &[1, -1]]);
        let f = make_fan(2, r, vec![vec![0, 1]], u64::MAX).unwrap();
        assert_eq!(f.cone_multiplicity(&Cone::new(vec![0, 1])).unwrap(), BigInt::from(2));
        assert_eq!(f.cone_multiplicity(&Cone::new(vec![0])).unwrap(), BigInt::from(1));

        let e = rays(&[&[1, 0], &[0, 1]]);
        let g = make_fan(2, e, vec![vec![0, 1]], u64::MAX).unwrap();
        assert_eq!(g.cone_multiplicity(&Cone::new(vec![0, 1])).unwrap(), BigInt::from(1));
    }

    #[test]
    fn multiplicity_is_stable_under_orthogonal_extension() {
        // mult(<(1,1,0),(1,-1,0)>) = mult with e3 adjoined = 2.
        let r = rays(&[&[1, 1, 0], &[1, -1, 0], &[0, 0, 1]]);
        let f = make_fan(3, r, vec![vec![0, 1, 2]], u64::MAX).unwrap();
        assert_eq!(f.cone_multiplicity(&Cone::new(vec![0, 1])).unwrap(), BigInt::from(2));
        assert_eq!(f.cone_multiplicity(&Cone::new(vec![0, 1, 2])).unwrap(), BigInt::from(2));
    }

    #[test]
    fn intersection_with_distinguished_ray() {
        let f = fan_p1xp1();
        // tau = <e1>, distinguished ray e2: both cones unimodular.
        let one = f.toric_intersection_d0(&[0], 1).unwrap();
        assert_eq!(one, BigRational::from(BigInt::from(1)));
        // Joined cone not in the fan.
        assert!(matches!(f.toric_intersection_d0(&[0], 2), Err(FanError::ConeNotInFan(_))));

        let r = rays(&[&[1, 1, 0], &[1, -1, 0], &[0, 0, 1]]);
        let g = make_fan(3, r, vec![vec![0, 1, 2]], u64::MAX).unwrap();
        assert_eq!(
            g.toric_intersection_d0(&[0, 1], 2).unwrap(),
            BigRational::from(BigInt::from(1))
        );
    }

    #[test]
    fn json_roundtrip() {
        let f = fan_hirzebruch(2);
        let v = f.to_json();
        let g = Fan::from_json(&v, u64::MAX).unwrap();
        assert_eq!(g.rays(), f.rays());
        assert_eq!(g.max_cones(), f.max_cones());
        assert!(Fan::from_json(&serde_json::json!({"rank": 2}), 0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// Random subdivision sequences keep the plane fan complete and
        /// revalidation from scratch agrees with the inherited flag.
        #[test]
        fn subdivision_sequences_stay_complete(
            seq in prop::collection::vec((-4i64..=4, -4i64..=4), 1..4)
        ) {
            let mut f = fan_p2();
            for (x, y) in seq {
                let Ok(r) = Ray::primitive(vec![BigInt::from(x), BigInt::from(y)]) else {
                    continue;
                };
                match f.star_subdivision(&r) {
                    Ok(g) => f = g,
                    Err(FanError::RayAlreadyPresent(_)) => continue,
                    Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
                }
            }
            prop_assert!(f.is_complete().unwrap());
            let mut fresh = f.clone();
            prop_assert!(fresh.revalidate(u64::MAX).unwrap());
            prop_assert!(fresh.is_complete().unwrap());
        }

        /// Same exercise inside the octant: validity is preserved even
        /// though the fan is not complete.
        #[test]
        fn octant_subdivisions_stay_valid(
            seq in prop::collection::vec((0i64..=3, 0i64..=3, 0i64..=3), 1..4)
        ) {
            let mut f = fan_octant();
            for (x, y, z) in seq {
                let Ok(r) = Ray::primitive(vec![
                    BigInt::from(x), BigInt::from(y), BigInt::from(z),
                ]) else { continue };
                match f.star_subdivision(&r) {
                    Ok(g) => f = g,
                    Err(FanError::RayAlreadyPresent(_)) => continue,
                    Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
                }
            }
            let mut fresh = f.clone();
            prop_assert!(fresh.revalidate(u64::MAX).unwrap());
            prop_assert!(!fresh.is_complete().unwrap());
        }
    }
}
