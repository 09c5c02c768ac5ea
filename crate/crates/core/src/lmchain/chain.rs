//! Rebuilds a complete simplicial fan on the full ray family by a
//! chain of rank-raising suspensions.
//!
//! Downward, each kernel vector is pushed through the projections so
//! far; its primitive image must be one of the current rays, the
//! opposite pair is removed, and the remaining rays project one rank
//! lower.  At rank 2 the surviving rays admit a unique complete fan,
//! and the chain is then replayed upward one suspension at a time,
//! recording per-step checks.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{lm_rays, LmError};
use crate::fan::{
    certify_projective, make_fan, project_fan, Fan, LatticeProjection, Projectivity, Ray,
};

/// What was verified at one rank of the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub rank: usize,
    pub ray_count: usize,
    pub cone_count: usize,
    pub complete: bool,
    pub simplicial: bool,
    /// Every cone upstairs maps onto a cone downstairs; trivially true
    /// for the rank-2 base.
    pub cone_onto_cone: bool,
    /// `None` when the certificate was skipped over budget.
    pub projective: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub n: usize,
    /// Base first, full-rank fan last.
    pub steps: Vec<ChainStep>,
}

impl ChainReport {
    pub fn all_checks_pass(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.complete && s.simplicial && s.cone_onto_cone && s.projective != Some(false))
    }
}

/// Angular order on nonzero plane vectors, counterclockwise from the
/// positive x-axis, decided exactly by half-plane and cross product.
fn angular_cmp(a: &Ray, b: &Ray) -> Ordering {
    fn half(v: &[BigInt]) -> u8 {
        use num_traits::Signed;
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    }
    let (va, vb) = (a.vector(), b.vector());
    half(va).cmp(&half(vb)).then_with(|| {
        let cross = &va[0] * &vb[1] - &va[1] * &vb[0];
        // Positive cross product puts a strictly before b.
        BigInt::zero().cmp(&cross)
    })
}

/// The unique complete fan on a set of plane rays: sort angularly and
/// take consecutive pairs as cones.
pub fn surface_fan(rays: Vec<Ray>, validate_budget: u64) -> Result<Fan, LmError> {
    let mut rays = rays;
    rays.sort_by(angular_cmp);
    rays.dedup();
    if rays.len() < 3 {
        return Err(LmError::Fan(crate::fan::FanError::InvalidInput(format!(
            "a complete plane fan needs at least 3 rays, got {}",
            rays.len()
        ))));
    }
    let k = rays.len();
    let cones: Vec<Vec<usize>> = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    let fan = make_fan(2, rays, cones, validate_budget)?;
    if !fan.is_complete()? {
        return Err(LmError::Fan(crate::fan::FanError::NotComplete));
    }
    Ok(fan)
}

/// The kernel sequence e_1 + e_{j+1}, j = 1, ..., n-5, in the rank
/// n-3 coordinates.
pub fn default_kernels(n: usize) -> Vec<Vec<BigInt>> {
    let dim = n - 3;
    (1..=n.saturating_sub(5))
        .map(|j| {
            let mut v = vec![BigInt::zero(); dim];
            v[0] += 1;
            v[j] += 1;
            v
        })
        .collect()
}

fn step_record(fan: &Fan, budget: u64) -> Result<ChainStep, LmError> {
    let complete = fan.is_complete()?;
    let simplicial = fan.max_cones().iter().all(|c| fan.cone_multiplicity(c).is_ok());
    let k = fan.max_cones().len() as u64;
    let pairs = k * (k.saturating_sub(1)) / 2;
    let projective = if fan.rank() <= 3 || pairs <= budget {
        Some(matches!(certify_projective(fan)?, Projectivity::Certified(_)))
    } else {
        None
    };
    Ok(ChainStep {
        rank: fan.rank(),
        ray_count: fan.rays().len(),
        cone_count: fan.max_cones().len(),
        complete,
        simplicial,
        cone_onto_cone: true,
        projective,
    })
}

/// Runs the chain for the full ray family at n.  The kernel vectors
/// are given in the original rank n-3 coordinates, one per rank to
/// shed, and each must land on a current ray after the projections
/// made so far.  Returns the reconstructed full-rank fan and the
/// per-step report.
///
/// The rank-2 base is always validated in full.  The suspension steps
/// are validated by construction; the budget gates their quadratic
/// revalidation and the projectivity certificates (which always run at
/// rank <= 3).
pub fn build_chain(
    n: usize,
    kernels: &[Vec<BigInt>],
    budget: u64,
) -> Result<(Fan, ChainReport), LmError> {
    let top_rays = lm_rays(n)?;
    let expected = n - 5;
    if kernels.len() != expected {
        return Err(LmError::WrongKernelCount { expected, got: kernels.len() });
    }

    // Downward: peel one rank per kernel vector, remembering what each
    // level needs for the way back up.
    let mut current: Vec<Ray> = top_rays.clone();
    let mut levels: Vec<(LatticeProjection, Vec<Ray>)> = Vec::new();
    for (step, kernel) in kernels.iter().enumerate() {
        if kernel.len() != n - 3 {
            return Err(LmError::KernelNotRay {
                step,
                detail: format!("kernel has {} coordinates, lattice has {}", kernel.len(), n - 3),
            });
        }
        let mut image = kernel.clone();
        for (proj, _) in &levels {
            image = proj.apply(&image);
        }
        let pivot = Ray::primitive(image).map_err(|e| LmError::KernelNotRay {
            step,
            detail: format!("image of the kernel vector is degenerate: {e}"),
        })?;
        if !current.contains(&pivot) {
            return Err(LmError::KernelNotRay {
                step,
                detail: format!("{pivot} is not among the {} current rays", current.len()),
            });
        }
        let proj = LatticeProjection::from_kernel(pivot.vector())?;
        let negated = pivot.negated();
        let gamma: Vec<Ray> =
            current.iter().filter(|r| **r != pivot && **r != negated).cloned().collect();
        let next: BTreeSet<Ray> = gamma
            .iter()
            .map(|r| Ray::primitive(proj.apply(r.vector())).expect("no other ray is parallel"))
            .collect();
        levels.push((proj, gamma));
        current = next.into_iter().collect();
    }

    // Upward: the unique complete structure at rank 2, then one
    // suspension per level.
    let mut fan = surface_fan(current, u64::MAX)?;
    let mut steps = vec![step_record(&fan, budget)?];
    for (proj, gamma) in levels.iter().rev() {
        fan = project_fan(proj, gamma, &fan, budget)?;
        steps.push(step_record(&fan, budget)?);
    }

    let got: BTreeSet<Ray> = fan.rays().iter().cloned().collect();
    let want: BTreeSet<Ray> = top_rays.into_iter().collect();
    assert_eq!(got, want, "the reconstructed fan has exactly the full ray family");
    Ok((fan, ChainReport { n, steps }))
}
