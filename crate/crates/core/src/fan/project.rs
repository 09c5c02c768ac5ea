//! Rank-one lattice quotients and fans built over a projected base.
//!
//! [`LatticeProjection`] packages the quotient of an ambient lattice by
//! a primitive kernel vector, together with an integral section.  Given
//! a validated complete fan downstairs and a collection of upstairs
//! rays whose primitive images are exactly the downstairs rays,
//! [`project_fan`] assembles a complete simplicial fan upstairs whose
//! cones map onto the downstairs cones: one representative per fiber
//! plus the two kernel directions give a suspension of the base, and
//! the remaining rays are inserted by star subdivision.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactmath::{snf, solve_unique, IntMatrix, RatMatrix};

use super::{content, Cone, Fan, FanError, Ray};

/// A unimodular change of coordinates splitting the ambient lattice as
/// (kernel line) + (downstairs lattice).
#[derive(Debug, Clone)]
pub struct LatticeProjection {
    kernel: Vec<BigInt>,
    functional: Vec<BigInt>,
    matrix: Vec<Vec<BigInt>>,
    lift_matrix: Vec<Vec<BigInt>>,
}

impl LatticeProjection {
    /// Builds the projection with kernel spanned by `v0`, which must be
    /// primitive.  The rows of a Smith normal form transform give the
    /// dual functional (value 1 on `v0`) and the projection matrix; the
    /// inverse transform gives an integral lift.
    pub fn from_kernel(v0: &[BigInt]) -> Result<LatticeProjection, FanError> {
        let r = v0.len();
        if r < 2 {
            return Err(FanError::InvalidInput(
                "projection kernel needs an ambient rank of at least 2".into(),
            ));
        }
        let c = content(v0);
        if c.is_zero() {
            return Err(FanError::ZeroVector);
        }
        if !c.is_one() {
            return Err(FanError::NonPrimitiveKernel);
        }
        let mut column = IntMatrix::zero(r, 1);
        for (i, x) in v0.iter().enumerate() {
            column.set(i, 0, x.clone());
        }
        let dec = snf(&column);
        assert_eq!(dec.divisors(), vec![BigInt::one()], "a primitive column has divisor 1");
        let mut u: Vec<Vec<BigInt>> =
            (0..r).map(|i| (0..r).map(|j| dec.u.get(i, j).clone()).collect()).collect();
        let image: Vec<BigInt> =
            u.iter().map(|row| row.iter().zip(v0).map(|(a, b)| a * b).sum()).collect();
        if image[0] == BigInt::from(-1) {
            for x in &mut u[0] {
                *x = -&*x;
            }
        } else {
            assert!(image[0].is_one(), "transform must send the kernel to a basis vector");
        }
        // Invert the unimodular transform column by column.
        let mut u_rat = RatMatrix::zero(r, r);
        for (i, row) in u.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                u_rat.set(i, j, BigRational::from(x.clone()));
            }
        }
        let mut inverse: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); r]; r];
        for j in 0..r {
            let mut e = vec![BigRational::zero(); r];
            e[j] = BigRational::one();
            let col = solve_unique(&u_rat, &e).expect("unimodular matrices are invertible");
            for (i, x) in col.into_iter().enumerate() {
                assert!(x.is_integer(), "the inverse of a unimodular matrix is integral");
                inverse[i][j] = x.to_integer();
            }
        }
        let functional = u[0].clone();
        let matrix: Vec<Vec<BigInt>> = u[1..].to_vec();
        let lift_matrix: Vec<Vec<BigInt>> =
            (0..r).map(|i| (1..r).map(|j| inverse[i][j].clone()).collect()).collect();
        let proj = LatticeProjection { kernel: v0.to_vec(), functional, matrix, lift_matrix };
        debug_assert!(proj.apply(v0).iter().all(|x| x.is_zero()));
        debug_assert!(proj.kernel_coordinate(v0).is_one());
        Ok(proj)
    }

    pub fn rank_upstairs(&self) -> usize {
        self.kernel.len()
    }

    pub fn rank_downstairs(&self) -> usize {
        self.kernel.len() - 1
    }

    pub fn kernel_vector(&self) -> &[BigInt] {
        &self.kernel
    }

    /// Image of an upstairs vector in the quotient lattice.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rank_upstairs(), "vector has the wrong dimension");
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Coefficient of the kernel vector in the splitting; vanishes
    /// exactly on the chosen complement.
    pub fn kernel_coordinate(&self, v: &[BigInt]) -> BigInt {
        assert_eq!(v.len(), self.rank_upstairs(), "vector has the wrong dimension");
        self.functional.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Integral section: `apply(lift(w)) == w` and
    /// `kernel_coordinate(lift(w)) == 0`.
    pub fn lift(&self, w: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(w.len(), self.rank_downstairs(), "vector has the wrong dimension");
        self.lift_matrix.iter().map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Builds the complete fan upstairs with rays `gamma` plus the two
/// kernel directions, lying over the validated complete fan
/// `downstairs`.
///
/// Every ray of `gamma` must project to a positive multiple of a
/// downstairs ray, every downstairs ray must be hit, and the kernel
/// directions themselves may not appear in `gamma`.  Per downstairs ray
/// the representative with the smallest kernel/image ratio joins the
/// suspension base; the rest are star-subdivided in, fiber by fiber in
/// ascending ratio.  The construction is a fan by the suspension and
/// subdivision theorems, so the result inherits a validated flag; the
/// final fan is additionally revalidated within `validate_budget` and
/// its completeness and cone-over-cone property are checked
/// unconditionally.
pub fn project_fan(
    proj: &LatticeProjection,
    gamma: &[Ray],
    downstairs: &Fan,
    validate_budget: u64,
) -> Result<Fan, FanError> {
    let up = proj.rank_upstairs();
    if downstairs.rank() != proj.rank_downstairs() {
        return Err(FanError::InvalidInput(format!(
            "projection lands in rank {}, downstairs fan has rank {}",
            proj.rank_downstairs(),
            downstairs.rank()
        )));
    }
    if !downstairs.is_validated() {
        return Err(FanError::Unvalidated);
    }
    if !downstairs.is_complete()? {
        return Err(FanError::NotComplete);
    }
    let mut seen = BTreeSet::new();
    for g in gamma {
        if g.dim() != up {
            return Err(FanError::WrongDimension { ray: g.to_string(), got: g.dim(), rank: up });
        }
        if !seen.insert(g.vector().to_vec()) {
            return Err(FanError::DuplicateRay(g.to_string()));
        }
    }
    // Group the rays by the downstairs ray under their primitive image,
    // recording the ratio of kernel height to image length.
    let q = downstairs.rays().len();
    let mut fibers: Vec<Vec<(BigRational, usize)>> = vec![Vec::new(); q];
    for (gi, g) in gamma.iter().enumerate() {
        let image = proj.apply(g.vector());
        let h = content(&image);
        if h.is_zero() {
            return Err(FanError::KernelRayInGamma(g.to_string()));
        }
        let prim = Ray::primitive(image).expect("nonzero image");
        let Some(k) = downstairs.ray_index(&prim) else {
            return Err(FanError::DownstairsMismatch(format!(
                "ray {g} projects to {prim}, which is not a downstairs ray"
            )));
        };
        let ratio = BigRational::new(proj.kernel_coordinate(g.vector()), h);
        fibers[k].push((ratio, gi));
    }
    for (k, fiber) in fibers.iter().enumerate() {
        if fiber.is_empty() {
            return Err(FanError::DownstairsMismatch(format!(
                "no ray projects to the downstairs ray {}",
                downstairs.rays()[k]
            )));
        }
    }
    for fiber in &mut fibers {
        fiber.sort();
    }
    // Suspension over the base: one representative per downstairs ray,
    // then the kernel ray and its negative.
    let v0 = Ray::new(proj.kernel_vector().to_vec()).expect("kernel vector is primitive");
    let minus_v0 = v0.negated();
    let mut rays: Vec<Ray> = (0..q).map(|k| gamma[fibers[k][0].1].clone()).collect();
    rays.push(v0.clone());
    rays.push(minus_v0.clone());
    let mut cones = Vec::new();
    for c in downstairs.max_cones() {
        for apex in [q, q + 1] {
            let mut idx = c.ray_indices().to_vec();
            idx.push(apex);
            cones.push(Cone::new(idx));
        }
    }
    let mut fan = Fan::from_parts(up, rays, cones, true);
    for fiber in &fibers {
        for &(_, gi) in fiber.iter().skip(1) {
            fan = fan
                .star_subdivision(&gamma[gi])
                .expect("remaining fiber rays lie inside a complete fan");
        }
    }
    // The construction is checked, not trusted: exact ray set, face
    // validation within budget, completeness, and that each cone sits
    // over a downstairs cone.
    let expected: BTreeSet<Vec<BigInt>> = gamma
        .iter()
        .map(|g| g.vector().to_vec())
        .chain([v0.vector().to_vec(), minus_v0.vector().to_vec()])
        .collect();
    let got: BTreeSet<Vec<BigInt>> = fan.rays().iter().map(|r| r.vector().to_vec()).collect();
    assert_eq!(got, expected, "projected fan must use the given rays plus the kernel pair");
    fan.revalidate(validate_budget)
        .expect("projected fan must intersect pairwise in faces");
    assert!(fan.is_complete()?, "projected fan must be complete");
    let v0_idx = fan.ray_index(&v0);
    let m_idx = fan.ray_index(&minus_v0);
    for c in fan.max_cones() {
        let mut below = BTreeSet::new();
        for &i in c.ray_indices() {
            if Some(i) == v0_idx || Some(i) == m_idx {
                continue;
            }
            let prim = Ray::primitive(proj.apply(fan.rays()[i].vector())).expect("nonzero");
            below.insert(downstairs.ray_index(&prim).expect("checked above"));
        }
        assert!(
            downstairs.max_cones().iter().any(|dc| below.iter().all(|&i| dc.contains(i))),
            "upstairs cone {c} must lie over a downstairs cone"
        );
    }
    Ok(fan)
}

#[cfg(test)]
mod tests {
    use super::super::{fan_p2, make_fan};
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn line_fan() -> Fan {
        let rays = vec![Ray::from_ints(&[1]).unwrap(), Ray::from_ints(&[-1]).unwrap()];
        make_fan(1, rays, vec![vec![0], vec![1]], u64::MAX).unwrap()
    }

    #[test]
    fn projection_splits_the_lattice() {
        let p = LatticeProjection::from_kernel(&big(&[2, 3])).unwrap();
        assert_eq!(p.kernel_coordinate(&big(&[2, 3])), BigInt::one());
        assert!(p.apply(&big(&[2, 3])).iter().all(|x| x.is_zero()));
        // Section property in the quotient.
        for w in [big(&[1]), big(&[-5]), big(&[7])] {
            let l = p.lift(&w);
            assert_eq!(p.apply(&l), w);
            assert!(p.kernel_coordinate(&l).is_zero());
        }
        // Splitting reconstructs any vector.
        for v in [big(&[4, -1]), big(&[0, 1]), big(&[-3, -3])] {
            let s = p.kernel_coordinate(&v);
            let w = p.apply(&v);
            let rebuilt: Vec<BigInt> = p
                .lift(&w)
                .iter()
                .zip(p.kernel_vector())
                .map(|(a, k)| a + k * &s)
                .collect();
            assert_eq!(rebuilt, v);
        }
    }

    #[test]
    fn kernel_must_be_primitive_and_nonzero() {
        assert!(matches!(
            LatticeProjection::from_kernel(&big(&[2, 4])),
            Err(FanError::NonPrimitiveKernel)
        ));
        assert!(matches!(
            LatticeProjection::from_kernel(&big(&[0, 0])),
            Err(FanError::ZeroVector)
        ));
        assert!(LatticeProjection::from_kernel(&big(&[1])).is_err());
    }

    #[test]
    fn suspension_of_the_line() {
        let p = LatticeProjection::from_kernel(&big(&[0, 1])).unwrap();
        let gamma = vec![Ray::from_ints(&[1, 0]).unwrap(), Ray::from_ints(&[-1, 0]).unwrap()];
        let fan = project_fan(&p, &gamma, &line_fan(), u64::MAX).unwrap();
        assert_eq!(fan.rays().len(), 4);
        assert_eq!(fan.max_cones().len(), 4);
        assert!(fan.is_complete().unwrap());
    }

    #[test]
    fn extra_fiber_ray_subdivides_the_suspension() {
        let p = LatticeProjection::from_kernel(&big(&[0, 1])).unwrap();
        let gamma = vec![
            Ray::from_ints(&[1, 0]).unwrap(),
            Ray::from_ints(&[1, 1]).unwrap(),
            Ray::from_ints(&[-1, 0]).unwrap(),
        ];
        let fan = project_fan(&p, &gamma, &line_fan(), u64::MAX).unwrap();
        assert_eq!(fan.rays().len(), 5);
        assert_eq!(fan.max_cones().len(), 5);
        assert!(fan.is_complete().unwrap());
    }

    #[test]
    fn representative_order_does_not_matter() {
        // Same fiber data with the larger-ratio ray listed first.
        let p = LatticeProjection::from_kernel(&big(&[0, 1])).unwrap();
        let gamma = vec![
            Ray::from_ints(&[1, 1]).unwrap(),
            Ray::from_ints(&[1, 0]).unwrap(),
            Ray::from_ints(&[1, -2]).unwrap(),
            Ray::from_ints(&[-1, 0]).unwrap(),
        ];
        let fan = project_fan(&p, &gamma, &line_fan(), u64::MAX).unwrap();
        assert_eq!(fan.max_cones().len(), 6);
        assert!(fan.is_complete().unwrap());
    }

    #[test]
    fn suspension_of_the_plane_fan() {
        let p = LatticeProjection::from_kernel(&big(&[0, 0, 1])).unwrap();
        let gamma = vec![
            Ray::from_ints(&[1, 0, 0]).unwrap(),
            Ray::from_ints(&[0, 1, 0]).unwrap(),
            Ray::from_ints(&[-1, -1, 0]).unwrap(),
        ];
        let fan = project_fan(&p, &gamma, &fan_p2(), u64::MAX).unwrap();
        assert_eq!(fan.max_cones().len(), 6);
        assert!(fan.is_complete().unwrap());

        // A second ray over e1 forces one subdivision step.
        let gamma2 = vec![
            Ray::from_ints(&[1, 0, 0]).unwrap(),
            Ray::from_ints(&[1, 0, 1]).unwrap(),
            Ray::from_ints(&[0, 1, 0]).unwrap(),
            Ray::from_ints(&[-1, -1, 0]).unwrap(),
        ];
        let fan2 = project_fan(&p, &gamma2, &fan_p2(), u64::MAX).unwrap();
        assert_eq!(fan2.max_cones().len(), 8);
        assert!(fan2.is_complete().unwrap());
    }

    #[test]
    fn rejects_kernel_rays_and_bad_images() {
        let p = LatticeProjection::from_kernel(&big(&[0, 1])).unwrap();
        let with_kernel = vec![
            Ray::from_ints(&[1, 0]).unwrap(),
            Ray::from_ints(&[0, 1]).unwrap(),
            Ray::from_ints(&[-1, 0]).unwrap(),
        ];
        assert!(matches!(
            project_fan(&p, &with_kernel, &line_fan(), u64::MAX),
            Err(FanError::KernelRayInGamma(_))
        ));

        let missing_fiber = vec![Ray::from_ints(&[1, 0]).unwrap()];
        assert!(matches!(
            project_fan(&p, &missing_fiber, &line_fan(), u64::MAX),
            Err(FanError::DownstairsMismatch(_))
        ));

        let p3 = LatticeProjection::from_kernel(&big(&[0, 0, 1])).unwrap();
        let off_target = vec![
            Ray::from_ints(&[1, 0, 0]).unwrap(),
            Ray::from_ints(&[1, 1, 0]).unwrap(),
            Ray::from_ints(&[0, 1, 0]).unwrap(),
            Ray::from_ints(&[-1, -1, 0]).unwrap(),
        ];
        assert!(matches!(
            project_fan(&p3, &off_target, &fan_p2(), u64::MAX),
            Err(FanError::DownstairsMismatch(_))
        ));
    }

    #[test]
    fn downstairs_must_be_validated_and_complete() {
        let p = LatticeProjection::from_kernel(&big(&[0, 1])).unwrap();
        let gamma = vec![Ray::from_ints(&[1, 0]).unwrap(), Ray::from_ints(&[-1, 0]).unwrap()];
        let mut unvalidated = line_fan();
        unvalidated.validated = false;
        assert!(matches!(
            project_fan(&p, &gamma, &unvalidated, u64::MAX),
            Err(FanError::Unvalidated)
        ));

        let half =
            make_fan(1, vec![Ray::from_ints(&[1]).unwrap()], vec![vec![0]], u64::MAX).unwrap();
        assert!(matches!(
            project_fan(&p, &gamma, &half, u64::MAX),
            Err(FanError::NotComplete)
        ));
    }

    #[test]
    fn skew_kernel_still_projects() {
        // Kernel (1, 2): the splitting is not coordinate-aligned.
        let p = LatticeProjection::from_kernel(&big(&[1, 2])).unwrap();
        let lifted_plus = p.lift(&big(&[1]));
        let lifted_minus: Vec<BigInt> = lifted_plus.iter().map(|x| -x).collect();
        let gamma =
            vec![Ray::primitive(lifted_plus).unwrap(), Ray::primitive(lifted_minus).unwrap()];
        let fan = project_fan(&p, &gamma, &line_fan(), u64::MAX).unwrap();
        assert_eq!(fan.max_cones().len(), 4);
        assert!(fan.is_complete().unwrap());
    }
}
