//! The check batteries behind each subcommand.  Every function returns
//! the reports for one suite, or an error string for a usage-level
//! problem (bad parameters, unreadable input); mathematical failures
//! are never errors, they are failing reports carrying the
//! counterexample.

use std::path::Path;

use mdv_core::boundary::{compatible_system_check, transform_sequence, BoundaryError};
use mdv_core::fan::{certify_projective, Fan, Projectivity};
use mdv_core::gnwpoly::{char_p_witness, gnw_system, system_identities, GnwError, GnwSystem};
use mdv_core::lmchain::{build_chain, default_kernels, quotient_data, wps_fan, LmError, LmPartition};
use mdv_core::report::{timed, CheckReport};
use mdv_core::wps::{
    class_intersection, d1_determinant, effectivity_kernel, huneke_witness_search,
    in_symbolic_power, negative_curve, orthogonal_class, CurveData, DivClass, WeightedTriple,
};
use mdv_core::{Polynomial, Rationals};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn usage<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// The defining identities at m, the symbolic-power memberships of the
/// witness polynomials, and optionally the characteristic-p witness.
pub fn gnw_verify(m: u64, p: Option<u64>) -> Result<Vec<CheckReport>, String> {
    let sys = gnw_system(m).map_err(usage)?;
    let mut out = Vec::new();
    let (identities, wall) = timed(|| system_identities(&sys));
    for check in &identities.checks {
        let report = if check.holds {
            CheckReport::pass("gnw-identity", "holds")
        } else {
            CheckReport::fail(
                "gnw-identity",
                format!(
                    "fails; surviving term {}",
                    check.witness.as_deref().unwrap_or("unknown")
                ),
            )
        };
        out.push(report.with_input("m", m).with_input("identity", check.name).with_wall(wall));
    }
    out.extend(membership_checks(&sys)?);
    if let Some(p) = p {
        out.push(char_p(m, p)?);
    }
    Ok(out)
}

/// Symbolic-power membership of d2 (order 2) and d3, d3' (order 3)
/// along the negative curve, plus non-divisibility of d3 by g_c.
pub fn symbolic_power(m: u64) -> Result<Vec<CheckReport>, String> {
    let sys = gnw_system(m).map_err(usage)?;
    membership_checks(&sys)
}

fn membership_checks(sys: &GnwSystem) -> Result<Vec<CheckReport>, String> {
    let [dh, dl, de] = sys.curve_weights();
    let t = WeightedTriple::new(dh, dl, de).map_err(usage)?;
    let mut out = Vec::new();
    let polys: [(&str, &Polynomial<Rationals>, u64); 3] =
        [("d2", &sys.d2, 2), ("d3", &sys.d3, 3), ("d3'", &sys.d3p, 3)];
    for (name, poly, level) in polys {
        let (member, wall) = timed(|| in_symbolic_power(poly, level, &t));
        let report = if member {
            CheckReport::pass(
                "symbolic-power",
                format!("lies in the symbolic power of order {level}"),
            )
        } else {
            CheckReport::fail(
                "symbolic-power",
                format!("{name} misses the symbolic power of order {level}"),
            )
        };
        out.push(
            report
                .with_input("m", sys.m)
                .with_input("poly", name)
                .with_input("level", level)
                .with_wall(wall),
        );
    }
    let (divides, wall) = timed(|| sys.g_c.divides(&sys.d3));
    let report = if divides {
        CheckReport::fail("non-multiple", "d3 is a multiple of g_c")
    } else {
        CheckReport::pass("non-multiple", "d3 is not a multiple of g_c")
    };
    out.push(report.with_input("m", sys.m).with_wall(wall));
    Ok(out)
}

/// Builds the characteristic-p witness and reports its shape.
pub fn char_p(m: u64, p: u64) -> Result<CheckReport, String> {
    let (result, wall) = timed(|| char_p_witness(m, p));
    match result {
        Ok(h) => {
            let grading = gnw_system(m).map_err(usage)?.grading();
            let degree = grading.weighted_degree(&h).map_err(usage)?;
            Ok(CheckReport::pass(
                "char-p-witness",
                format!("witness with {} terms, weighted degree {degree}", h.num_terms()),
            )
            .with_input("m", m)
            .with_input("p", p)
            .with_wall(wall))
        }
        Err(GnwError::NotDivisible(power)) => Ok(CheckReport::fail(
            "char-p-witness",
            format!("numerator is not divisible by z^{power}"),
        )
        .with_input("m", m)
        .with_input("p", p)
        .with_wall(wall)),
        Err(e) => Err(usage(e)),
    }
}

/// The determinant of the 6x6 second-derivative matrix against its
/// closed form, one row per admissible m in the range.
pub fn determinant_table(m_from: u64, m_to: u64) -> Result<Vec<CheckReport>, String> {
    if m_from < 4 || m_from > m_to {
        return Err(format!("need 4 <= m-from <= m-to, got {m_from}..{m_to}"));
    }
    let mut out = Vec::new();
    for m in m_from..=m_to {
        if m % 3 == 0 {
            continue;
        }
        let (row, wall) = timed(|| d1_determinant(m));
        let row = row.map_err(usage)?;
        let det = row.determinant.abs();
        let report = if row.equal {
            CheckReport::pass("determinant-row", format!("|det| = {det} = closed form"))
        } else {
            CheckReport::fail(
                "determinant-row",
                format!("|det| = {det} but the closed form gives {}", row.closed_form),
            )
        };
        out.push(report.with_input("m", m).with_wall(wall));
    }
    Ok(out)
}

/// The negative-curve invariants at m, then a level-by-level search
/// for sections that are not multiples of the curve; for the family
/// here every section must be a multiple, so a found witness fails.
pub fn witness_search_gnw(m: u64, k_max: u64) -> Result<Vec<CheckReport>, String> {
    let (curve, wall) = timed(|| negative_curve(m));
    let curve = curve.map_err(usage)?;
    let t = curve.triple();
    let self_int = curve.self_intersection();
    let mut out = Vec::new();
    let report = if self_int.is_negative() {
        CheckReport::pass(
            "negative-curve",
            format!("irreducible class {} with self-intersection {self_int}", curve.class()),
        )
    } else {
        CheckReport::fail(
            "negative-curve",
            format!("self-intersection {self_int} is not negative"),
        )
    };
    out.push(report.with_input("m", m).with_wall(wall));

    let base = orthogonal_class(&t, &curve.class()).map_err(usage)?;
    for k in 1..=k_max {
        let (found, wall) = timed(|| -> Result<_, String> {
            let cls = base.scaled(i64::try_from(k).map_err(usage)?);
            let pairing = class_intersection(&t, &cls, &curve.class());
            if !pairing.is_zero() {
                return Err(format!("class at level {k} is not orthogonal to the curve"));
            }
            let basis = effectivity_kernel(&t, &cls);
            Ok((basis.len(), basis.into_iter().find(|f| !curve.equation().divides(f))))
        });
        let (dim, witness) = found?;
        let report = match witness {
            None => CheckReport::pass(
                "witness-absent",
                format!("all {dim} basis sections are multiples of the curve"),
            ),
            Some(poly) => CheckReport::fail(
                "witness-absent",
                format!("non-multiple section with {} terms", poly.num_terms()),
            ),
        };
        out.push(report.with_input("m", m).with_input("level", k).with_wall(wall));
    }
    Ok(out)
}

/// The reference search on the (1, 2, 3) plane along the parabola,
/// where a witness must exist at every level.
pub fn witness_search_huneke(k_max: u64) -> Result<Vec<CheckReport>, String> {
    let t = WeightedTriple::new(1, 2, 3).map_err(usage)?;
    let parabola = Polynomial::from_terms(
        Rationals,
        3,
        [
            (vec![0u32, 1, 0], BigRational::from(BigInt::from(1))),
            (vec![2, 0, 0], BigRational::from(BigInt::from(-1))),
        ],
    )
    .map_err(usage)?;
    let curve = CurveData::new(parabola, DivClass::new(2, 1), t).map_err(usage)?;
    let (witnesses, wall) = timed(|| huneke_witness_search(&t, &curve, k_max));
    let witnesses = witnesses.map_err(usage)?;
    let mut out = Vec::new();
    for k in 1..=k_max {
        let report = match witnesses.iter().find(|(level, _)| *level == k) {
            Some((_, poly)) => CheckReport::pass(
                "witness-found",
                format!("non-multiple section with {} terms", poly.num_terms()),
            ),
            None => CheckReport::fail(
                "witness-found",
                format!("every section at level {k} is a multiple of the parabola"),
            ),
        };
        out.push(report.with_input("weights", "1,2,3").with_input("level", k).with_wall(wall));
    }
    Ok(out)
}

/// Quotient data for the contiguous marked partition with block
/// weights (a, b, c): lattice properties, pairwise image indices, and
/// the quotient fan when the weights are coprime.
pub fn lm_quotient(a: usize, b: usize, c: usize) -> Result<Vec<CheckReport>, String> {
    let part = LmPartition::contiguous(a, b, c).map_err(usage)?;
    let n = part.n();
    let inputs = |r: CheckReport| {
        r.with_input("n", n).with_input("a", a).with_input("b", b).with_input("c", c)
    };
    let (data, wall) = timed(|| quotient_data(&part));
    let data = match data {
        Ok(data) => data,
        Err(LmError::Degenerate { property, detail }) => {
            return Ok(vec![inputs(
                CheckReport::fail(
                    "lm-quotient",
                    format!("lattice property {property} fails: {detail}"),
                )
                .with_wall(wall),
            )]);
        }
        Err(e) => return Err(usage(e)),
    };
    let mut out = vec![inputs(
        CheckReport::pass(
            "lm-quotient",
            format!("rank {} sublattice is saturated and the images span the plane", n - 5),
        )
        .with_wall(wall),
    )];

    // Opposite pairwise indices: |det(v_i, v_j)| must be (c, b, a).
    let minor = |i: usize, j: usize| -> BigInt {
        let (u, v) = (&data.images[i], &data.images[j]);
        (&u[0] * &v[1] - &u[1] * &v[0]).abs()
    };
    let got = [minor(0, 1), minor(0, 2), minor(1, 2)];
    let want = [BigInt::from(c), BigInt::from(b), BigInt::from(a)];
    let report = if got == want {
        CheckReport::pass("lm-quotient-indices", format!("pairwise indices ({c}, {b}, {a})"))
    } else {
        CheckReport::fail(
            "lm-quotient-indices",
            format!("pairwise indices ({}, {}, {}) instead of ({c}, {b}, {a})", got[0], got[1], got[2]),
        )
    };
    out.push(inputs(report));

    if part.is_coprime() {
        let (fan, wall) = timed(|| wps_fan(&data));
        let fan = fan.map_err(usage)?;
        let mut mults: Vec<BigInt> = fan
            .max_cones()
            .iter()
            .map(|cone| fan.cone_multiplicity(cone).expect("quotient fans are simplicial"))
            .collect();
        mults.sort();
        let mut expect: Vec<BigInt> =
            [a, b, c].iter().map(|&w| BigInt::from(w)).collect();
        expect.sort();
        let report = if mults == expect {
            CheckReport::pass(
                "lm-quotient-fan",
                format!("complete fan with cone multiplicities {{{a}, {b}, {c}}}"),
            )
        } else {
            CheckReport::fail("lm-quotient-fan", format!("cone multiplicities {mults:?}"))
        };
        out.push(inputs(report.with_wall(wall)));
    } else {
        let contents: Vec<String> = data
            .images
            .iter()
            .map(|v| v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).to_string())
            .collect();
        out.push(inputs(CheckReport::pass(
            "lm-quotient-fan",
            format!(
                "weights share a factor; image contents ({}) block a primitive fan",
                contents.join(", ")
            ),
        )));
    }
    Ok(out)
}

/// Rebuilds the fan chain from the surface up to the full family at n
/// markings, reporting every per-step structure check.
pub fn lm_chain(n: usize, budget: u64) -> Result<Vec<CheckReport>, String> {
    if !(5..=9).contains(&n) {
        return Err(format!("need 5 <= n <= 9 for the chain rebuild, got {n}"));
    }
    let kernels = default_kernels(n);
    let (result, wall) = timed(|| build_chain(n, &kernels, budget));
    let (fan, chain) = result.map_err(usage)?;
    let mut out = Vec::new();
    for step in &chain.steps {
        let structure = step.complete && step.simplicial && step.cone_onto_cone;
        let projective = match step.projective {
            Some(true) => "certified projective",
            Some(false) => "no strictly convex support function",
            None => "projectivity not attempted at this budget",
        };
        let report = if structure && step.projective != Some(false) {
            CheckReport::pass(
                "chain-step",
                format!(
                    "{} rays, {} cones, complete simplicial cover; {projective}",
                    step.ray_count, step.cone_count
                ),
            )
        } else {
            CheckReport::fail(
                "chain-step",
                format!(
                    "complete = {}, simplicial = {}, cone-onto-cone = {}; {projective}",
                    step.complete, step.simplicial, step.cone_onto_cone
                ),
            )
        };
        out.push(report.with_input("n", n).with_input("rank", step.rank).with_wall(wall));
    }
    out.push(
        CheckReport::pass(
            "chain-top",
            format!("top fan carries all {} rays of the family", fan.rays().len()),
        )
        .with_input("n", n)
        .with_wall(wall),
    );
    Ok(out)
}

/// Loads a fan fixture, revalidates it, and certifies or refutes
/// projectivity; `expect_refuted` flips which outcome passes.
pub fn fan_check(file: &Path, expect_refuted: bool, budget: u64) -> Result<Vec<CheckReport>, String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("malformed {}: {e}", file.display()))?;
    let (fan, wall) = timed(|| Fan::from_json(&value, budget));
    let fan = fan.map_err(|e| format!("malformed fan in {}: {e}", file.display()))?;
    let name = file
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| file.display().to_string());
    let mut out = Vec::new();
    let (complete, wall_complete) = timed(|| fan.is_complete());
    let report = match complete {
        Ok(true) => CheckReport::pass(
            "fan-complete",
            format!("rank {} fan with {} rays covers the lattice", fan.rank(), fan.rays().len()),
        ),
        Ok(false) => CheckReport::fail("fan-complete", "support misses a lattice point"),
        Err(e) => return Err(format!("completeness needs more budget: {e}")),
    };
    out.push(report.with_input("fixture", &name).with_wall(wall + wall_complete));

    let (verdict, wall) = timed(|| certify_projective(&fan));
    let verdict = verdict.map_err(usage)?;
    let report = match verdict {
        Projectivity::Certified(support) => {
            let detail = format!(
                "strictly convex support function on {} cones",
                support.pieces().len()
            );
            if expect_refuted {
                CheckReport::fail("fan-projective", format!("unexpectedly projective: {detail}"))
            } else {
                CheckReport::pass("fan-projective", detail)
            }
        }
        Projectivity::NotProjective(refutation) => {
            let detail = format!(
                "verified refutation combining {} wall inequalities",
                refutation.strict_multipliers.len()
            );
            if expect_refuted {
                CheckReport::pass("fan-refuted", detail)
            } else {
                CheckReport::fail("fan-projective", format!("no support function; {detail}"))
            }
        }
    };
    out.push(report.with_input("fixture", &name).with_wall(wall));
    Ok(out)
}

/// The compatibility conditions on the canonical section system for n,
/// and optionally the full retirement transformation.
pub fn compatible_sections(n: usize, transform: bool) -> Result<Vec<CheckReport>, String> {
    let (report, wall) = timed(|| compatible_system_check(n));
    let report = report.map_err(usage)?;
    let mut out = Vec::new();
    let counts = format!(
        "{} sections, {} complementary pairs, {} with a nonempty subset family",
        report.sections, report.complementary_pairs, report.nonempty_k_pairs
    );
    let check = if report.pass() {
        CheckReport::pass("compatible-system", counts)
    } else {
        let detail = match &report.violation {
            Some([a, b, c]) => format!("{counts}; triple {a}, {b}, {c} has no nested pair"),
            None => format!("{counts}; a subset family member is out of order"),
        };
        CheckReport::fail("compatible-system", detail)
    };
    out.push(check.with_input("n", n).with_wall(wall));

    if transform {
        let (result, wall) = timed(|| transform_sequence(n));
        let check = match result {
            Ok(run) => CheckReport::pass(
                "transform-sequence",
                format!(
                    "{} steps with {} subset-family removals, conditions held throughout",
                    run.steps.len(),
                    run.removal_events
                ),
            ),
            Err(BoundaryError::PreconditionFailed { detail, .. }) => {
                CheckReport::fail("transform-sequence", format!("not run: {detail}"))
            }
            Err(BoundaryError::InvariantViolated { step, detail }) => {
                CheckReport::fail("transform-sequence", format!("step {step}: {detail}"))
            }
            Err(e) => return Err(usage(e)),
        };
        out.push(check.with_input("n", n).with_wall(wall));
    }
    Ok(out)
}
