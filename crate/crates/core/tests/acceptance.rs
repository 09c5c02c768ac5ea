//! The acceptance gate: eleven independent criteria, one test each,
//! every one re-deriving its expected values instead of trusting the
//! code under test.  Each prints a single pass line with its wall time
//! and enforces the runtime ceiling it was given.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use mdv_core::boundary::{compatible_system_check, transform_sequence};
use mdv_core::fan::{
    certify_projective, fan_hirzebruch, fan_nonprojective_cube, fan_p1xp1, fan_p2,
    projectivity_system, Projectivity,
};
use mdv_core::gnwpoly::{char_p_witness, gnw_system, verify_identities};
use mdv_core::lmchain::{build_chain, default_kernels, quotient_data, LmPartition};
use mdv_core::poly::{PrimeField, WeightedGrading};
use mdv_core::wps::{
    class_intersection, d1_determinant, effectivity_kernel, huneke_witness_search,
    in_symbolic_power, monomials_of_weighted_degree, multiplicity_at_e, negative_curve,
    orthogonal_class, CurveData, DivClass, WeightedTriple,
};
use mdv_core::{Polynomial, Rationals};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// The parameter sweep shared by the determinant and curve criteria.
fn admissible() -> impl Iterator<Item = u64> {
    (4..=40).filter(|m| m % 3 != 0)
}

fn triple(m: u64) -> WeightedTriple {
    WeightedTriple::new(7 * m - 3, 5 * m * m - 2 * m, 8 * m - 3).unwrap()
}

fn finish(number: u32, name: &str, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    println!("acceptance {number:02} {name}: PASS ({} ms)", elapsed.as_millis());
    assert!(elapsed < limit, "criterion {number} took {elapsed:?}, over the {limit:?} ceiling");
}

#[test]
fn criterion_01_determinant_identity() {
    let start = Instant::now();
    let f = BigInt::from;
    let mut seen = 0;
    for m in admissible() {
        let row = d1_determinant(m).unwrap();
        let closed = f(4)
            * f(7 * m - 3).pow(2)
            * f(8 * m - 3).pow(2)
            * f(7 * m - 4)
            * f(8 * m - 4)
            * f(51 * m * m - 43 * m + 9);
        assert_eq!(row.determinant.abs(), closed, "m = {m}");
        assert!(row.equal, "m = {m}");
        seen += 1;
    }
    assert_eq!(seen, 25);
    // Spot values frozen from an independent run.
    for (m, value) in [
        (4u64, "922610640000"),
        (5, "6689679261696"),
        (7, "122785076306880"),
        (8, "382072135922880"),
        (40, "214892472872180842176"),
    ] {
        let expected: BigInt = value.parse().unwrap();
        assert_eq!(d1_determinant(m).unwrap().determinant.abs(), expected, "m = {m}");
    }
    finish(1, "determinant identity", start, Duration::from_secs(10));
}

#[test]
fn criterion_02_six_monomials() {
    let start = Instant::now();
    for m in admissible() {
        let t = triple(m);
        let degree = (7 * m - 3) * (8 * m - 3);
        let got: BTreeSet<[u64; 3]> =
            monomials_of_weighted_degree(&t, degree).into_iter().collect();
        let want: BTreeSet<[u64; 3]> = [
            [m - 1, 5, 3 * m - 2],
            [4 * m - 2, 4, m - 1],
            [2 * m - 1, 2, 4 * m - 2],
            [5 * m - 2, 1, 2 * m - 1],
            [8 * m - 3, 0, 0],
            [0, 0, 7 * m - 3],
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want, "m = {m}");
    }
    let frozen: BTreeSet<[u64; 3]> =
        [[3, 5, 10], [14, 4, 3], [7, 2, 14], [18, 1, 7], [29, 0, 0], [0, 0, 25]]
            .into_iter()
            .collect();
    let got: BTreeSet<[u64; 3]> =
        monomials_of_weighted_degree(&triple(4), 25 * 29).into_iter().collect();
    assert_eq!(got, frozen);
    finish(2, "six-monomial enumeration", start, Duration::from_secs(5));
}

#[test]
fn criterion_03_gnw_identities() {
    let start = Instant::now();
    for m in [4u64, 5, 7, 8, 10, 11] {
        let report = verify_identities(m).unwrap();
        for check in &report.checks {
            assert!(check.holds, "m = {m}: {} fails", check.name);
        }
        assert_eq!(report.checks.len(), 4);
    }
    finish(3, "defining identities", start, Duration::from_secs(30));
}

#[test]
fn criterion_04_symbolic_powers() {
    let start = Instant::now();
    for m in [4u64, 5, 7, 8, 10, 11] {
        let sys = gnw_system(m).unwrap();
        let t = triple(m);
        assert!(in_symbolic_power(&sys.d2, 2, &t), "d2 at m = {m}");
        assert!(in_symbolic_power(&sys.d3, 3, &t), "d3 at m = {m}");
        assert!(in_symbolic_power(&sys.d3p, 3, &t), "d3' at m = {m}");
        assert!(!sys.g_c.divides(&sys.d3), "m = {m}: d3 must not be a multiple of g_c");
    }
    finish(4, "symbolic powers", start, Duration::from_secs(60));
}

#[test]
fn criterion_05_char_p_witness() {
    let start = Instant::now();
    let frozen: [(u64, u64, u64, usize); 5] = [
        (4, 3, 2175, 21),
        (4, 5, 3625, 38),
        (4, 7, 5075, 63),
        (5, 3, 3552, 21),
        (5, 5, 5920, 38),
    ];
    for (m, p, degree, terms) in frozen {
        let h = char_p_witness(m, p).unwrap();
        let weights = vec![7 * m - 3, 5 * m * m - 2 * m, 8 * m - 3];
        let grading = WeightedGrading::new(weights.clone());
        assert_eq!(grading.weighted_degree(&h).unwrap(), degree, "({m}, {p})");
        assert_eq!(degree, p * (7 * m - 3) * (8 * m - 3), "({m}, {p})");
        assert_eq!(h.num_terms(), terms, "({m}, {p})");
        let fp = PrimeField::new(p).unwrap();
        let c_mod_p = gnw_system(m).unwrap().g_c.reduce_mod(fp).unwrap();
        assert!(!c_mod_p.divides(&h), "({m}, {p}): g_c divides h");
        assert!(h.substitute_powers(&weights).is_zero(), "({m}, {p}): h off the curve");
    }
    finish(5, "characteristic-p witness", start, Duration::from_secs(120));
}

#[test]
fn criterion_06_negative_curve() {
    let start = Instant::now();
    for m in admissible() {
        let t = triple(m);
        let sys = gnw_system(m).unwrap();
        assert_eq!(multiplicity_at_e(&sys.g_c, &t).unwrap(), 1, "m = {m}");
        let curve = negative_curve(m).unwrap();
        assert_eq!(curve.class(), DivClass::new(3 * (5 * m * m - 2 * m) as i64, 1));
        assert!(curve.self_intersection().is_negative(), "m = {m}");
        let d0 = (7 * m - 3) * (8 * m - 3);
        for d in 1..=5u64 {
            let class = DivClass::new((d * d0) as i64, (3 * d) as i64);
            let pairing = class_intersection(&t, &class, &curve.class());
            assert!(pairing.is_zero(), "m = {m}, d = {d}: pairing {pairing}");
        }
    }
    finish(6, "negative curve", start, Duration::from_secs(5));
}

#[test]
fn criterion_07_witness_controls() {
    let start = Instant::now();
    // Positive control: the parabola on (1, 2, 3) yields a witness at
    // every level through 6.
    let small = WeightedTriple::new(1, 2, 3).unwrap();
    let parabola = Polynomial::from_terms(
        Rationals,
        3,
        [
            (vec![0u32, 1, 0], BigRational::from(BigInt::from(1))),
            (vec![2, 0, 0], BigRational::from(BigInt::from(-1))),
        ],
    )
    .unwrap();
    let curve = CurveData::new(parabola, DivClass::new(2, 1), small).unwrap();
    let found = huneke_witness_search(&small, &curve, 6).unwrap();
    let levels: Vec<u64> = found.iter().map(|(k, _)| *k).collect();
    assert_eq!(levels, vec![1, 2, 3, 4, 5, 6]);
    for (_, witness) in &found {
        assert!(!curve.equation().divides(witness));
    }

    // Negative control: at m = 4 the first two levels carry only
    // multiples of the curve (level 1 is empty outright).
    let t = triple(4);
    let gnw_curve = negative_curve(4).unwrap();
    let base = orthogonal_class(&t, &gnw_curve.class()).unwrap();
    let dims: Vec<usize> = (1..=2i64)
        .map(|k| {
            let basis = effectivity_kernel(&t, &base.scaled(k));
            for section in &basis {
                assert!(
                    gnw_curve.equation().divides(section),
                    "level {k} holds a non-multiple"
                );
            }
            basis.len()
        })
        .collect();
    assert_eq!(dims, vec![0, 1]);
    finish(7, "witness search controls", start, Duration::from_secs(120));
}

#[test]
fn criterion_08_lattice_quotients() {
    let start = Instant::now();
    for (n, a, b, c) in [(11usize, 1usize, 1usize, 1usize), (15, 1, 2, 4), (134, 25, 72, 29)] {
        let part = LmPartition::contiguous(a, b, c).unwrap();
        assert_eq!(part.n(), n);
        let data = quotient_data(&part).unwrap();
        // The weighted relation on the images, re-checked externally.
        for row in 0..2 {
            let sum = BigInt::from(a) * &data.images[0][row]
                + BigInt::from(b) * &data.images[1][row]
                + BigInt::from(c) * &data.images[2][row];
            assert!(sum.is_zero(), "(n, a, b, c) = ({n}, {a}, {b}, {c})");
        }
        // Opposite pairwise indices.
        let minor = |i: usize, j: usize| -> BigInt {
            (&data.images[i][0] * &data.images[j][1]
                - &data.images[i][1] * &data.images[j][0])
                .abs()
        };
        assert_eq!(minor(0, 1), BigInt::from(c));
        assert_eq!(minor(0, 2), BigInt::from(b));
        assert_eq!(minor(1, 2), BigInt::from(a));
        assert_eq!(data.generators.len(), n - 5);
    }
    finish(8, "lattice quotients", start, Duration::from_secs(60));
}

#[test]
fn criterion_09_fan_chain() {
    let start = Instant::now();
    for n in [6usize, 7] {
        let (fan, report) = build_chain(n, &default_kernels(n), 2000).unwrap();
        assert_eq!(fan.rank(), n - 3);
        assert!(report.all_checks_pass(), "n = {n}");
        for step in &report.steps {
            assert!(step.complete, "n = {n}, rank {}", step.rank);
            assert!(step.simplicial, "n = {n}, rank {}", step.rank);
            assert!(step.cone_onto_cone, "n = {n}, rank {}", step.rank);
            if step.rank <= 3 {
                assert_eq!(
                    step.projective,
                    Some(true),
                    "n = {n}: rank {} must be certified",
                    step.rank
                );
            }
        }
    }
    finish(9, "fan chain", start, Duration::from_secs(60));
}

#[test]
fn criterion_10_projectivity_certificates() {
    let start = Instant::now();
    let mut certified = vec![fan_p2(), fan_p1xp1()];
    certified.extend((1..=3).map(fan_hirzebruch));
    for fan in &certified {
        match certify_projective(fan).unwrap() {
            Projectivity::Certified(support) => assert!(support.verify(fan)),
            Projectivity::NotProjective(_) => panic!("expected a support function"),
        }
    }
    let cube = fan_nonprojective_cube();
    match certify_projective(&cube).unwrap() {
        Projectivity::Certified(_) => panic!("the twisted cube must not certify"),
        Projectivity::NotProjective(refutation) => {
            assert!(refutation.verify(&projectivity_system(&cube).unwrap()));
        }
    }
    finish(10, "projectivity certificates", start, Duration::from_secs(10));
}

#[test]
fn criterion_11_compatible_systems() {
    let start = Instant::now();
    for n in 5usize..=9 {
        let report = compatible_system_check(n).unwrap();
        assert!(report.pass(), "n = {n}");
        let run = transform_sequence(n).unwrap();
        assert_eq!(run.steps.len(), report.sections);
        if n >= 8 {
            assert!(report.nonempty_k_pairs > 0, "n = {n} needs nonempty subset families");
            assert!(run.removal_events > 0, "n = {n} needs at least one removal event");
        }
    }
    finish(11, "compatible systems", start, Duration::from_secs(60));
}
