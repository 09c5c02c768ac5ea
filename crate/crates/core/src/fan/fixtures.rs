//! Small reference fans used across the test suite and the shipped
//! corpus: the plane fans everyone knows, an affine octant, and a
//! complete fan that is provably not projective.

use super::{make_fan, Fan, Ray};

fn build(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    let rays = rays.iter().map(|v| Ray::from_ints(v).expect("fixture rays are primitive"));
    make_fan(rank, rays.collect(), cones.iter().map(|c| c.to_vec()).collect(), u64::MAX)
        .expect("fixture fans are valid")
}

/// The fan of the projective plane: three rays, three cones.
pub fn fan_p2() -> Fan {
    build(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]])
}

/// The fan of a product of two projective lines.
pub fn fan_p1xp1() -> Fan {
    build(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

/// The fan of the k-th Hirzebruch surface; `fan_hirzebruch(0)` is a
/// product of lines in a rotated presentation.
pub fn fan_hirzebruch(k: i64) -> Fan {
    build(2, &[&[1, 0], &[0, 1], &[-1, k], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

/// The first octant in rank 3: a valid fan that is not complete.
pub fn fan_octant() -> Fan {
    build(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[&[0, 1, 2]])
}

/// A complete simplicial fan admitting no strictly convex support
/// function.
///
/// The rays are the eight sign vectors and the twelve cones triangulate
/// the boundary of the cube, with the six face diagonals twisted into a
/// cycle so that no regular subdivision induces the pattern.  The exact
/// LP refutation is reproduced in the tests.
pub fn fan_nonprojective_cube() -> Fan {
    build(
        3,
        &[
            &[1, 1, 1],
            &[1, 1, -1],
            &[1, -1, 1],
            &[1, -1, -1],
            &[-1, 1, 1],
            &[-1, 1, -1],
            &[-1, -1, 1],
            &[-1, -1, -1],
        ],
        &[
            &[0, 1, 3],
            &[0, 2, 3],
            &[4, 5, 7],
            &[4, 6, 7],
            &[0, 1, 5],
            &[0, 4, 5],
            &[2, 3, 6],
            &[3, 6, 7],
            &[0, 2, 4],
            &[2, 4, 6],
            &[1, 3, 7],
            &[1, 5, 7],
        ],
    )
}
