//! Regenerates the fixture corpus under `fixtures/` and rewrites the
//! checksummed manifest.  Run from anywhere in the workspace:
//!
//! ```text
//! cargo run -p mdv-core --example gen_fixtures
//! ```
//!
//! Everything except the twisted cube is rebuilt from closed-form
//! definitions; the cube is a hand-tilted triangulation kept as the
//! reference input that admits no strictly convex support function.

use std::fs;
use std::path::{Path, PathBuf};

use mdv_core::corpus::{sha256_hex, verify_manifest, FixtureEntry, FixtureManifest, Origin};
use mdv_core::fan::{fan_hirzebruch, fan_nonprojective_cube, fan_p1xp1, fan_p2};
use mdv_core::gnwpoly::gnw_system;
use mdv_core::wps::{
    effectivity_kernel, huneke_witness_search, orthogonal_class, CurveData, DivClass,
    WeightedTriple,
};
use mdv_core::{Polynomial, Rationals};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

fn fixtures_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

struct Writer {
    root: PathBuf,
    entries: Vec<FixtureEntry>,
}

impl Writer {
    fn put(&mut self, path: &str, format: &str, kind: &str, note: &str, body: &Value) {
        let text = format!("{}\n", serde_json::to_string_pretty(body).unwrap());
        let file = self.root.join(path);
        fs::create_dir_all(file.parent().unwrap()).unwrap();
        fs::write(&file, &text).unwrap();
        self.entries.push(FixtureEntry {
            path: path.to_string(),
            format: format.to_string(),
            origin: Origin { kind: kind.to_string(), note: note.to_string() },
            sha256: sha256_hex(text.as_bytes()),
        });
        println!("wrote {path}");
    }
}

fn main() {
    let root = fixtures_root();
    let _ = fs::remove_dir_all(&root);
    fs::create_dir_all(&root).unwrap();
    let mut w = Writer { root: root.clone(), entries: Vec::new() };

    w.put(
        "fans/projective_plane.json",
        "fan",
        "textbook",
        "complete smooth fan of the projective plane; admits a strictly convex support function",
        &fan_p2().to_json(),
    );
    w.put(
        "fans/p1xp1.json",
        "fan",
        "textbook",
        "product of two projective lines; admits a strictly convex support function",
        &fan_p1xp1().to_json(),
    );
    w.put(
        "fans/hirzebruch_3.json",
        "fan",
        "textbook",
        "third Hirzebruch surface; admits a strictly convex support function",
        &fan_hirzebruch(3).to_json(),
    );
    w.put(
        "fans/cube_twisted.json",
        "fan",
        "derived",
        "hand-tilted triangulation of the cube's face fan with no strictly convex support \
         function; the refutation multipliers are re-verified against the wall system, and a \
         census of all triangulations of the same rays separates it from the 46 convex ones",
        &fan_nonprojective_cube().to_json(),
    );

    for m in [4u64, 5, 7] {
        let sys = gnw_system(m).unwrap();
        let [dh, dl, de] = sys.curve_weights();
        let body = json!({
            "m": m,
            "curve_weights": [dh, dl, de],
            "polynomials": {
                "g_a": sys.g_a.to_json(),
                "g_b": sys.g_b.to_json(),
                "g_c": sys.g_c.to_json(),
                "d2": sys.d2.to_json(),
                "d3": sys.d3.to_json(),
                "d3_prime": sys.d3p.to_json(),
            },
        });
        w.put(
            &format!("gnw/m{m}.json"),
            "gnw-system",
            "formula",
            "regenerated from the closed-form polynomial family; the defining identities and \
             weighted homogeneity are re-checked on load",
            &body,
        );
    }

    let t = WeightedTriple::new(1, 2, 3).unwrap();
    let parabola = Polynomial::from_terms(
        Rationals,
        3,
        [
            (vec![0u32, 1, 0], BigRational::from(BigInt::from(1))),
            (vec![2, 0, 0], BigRational::from(BigInt::from(-1))),
        ],
    )
    .unwrap();
    let curve = CurveData::new(parabola, DivClass::new(2, 1), t.clone()).unwrap();
    let base = orthogonal_class(&t, &curve.class()).unwrap();
    let witnesses = huneke_witness_search(&t, &curve, 6).unwrap();
    let levels: Vec<Value> = witnesses
        .iter()
        .map(|(k, poly)| {
            let dim = effectivity_kernel(&t, &base.scaled(*k as i64)).len();
            json!({ "level": k, "kernel_dim": dim, "witness": poly.to_json() })
        })
        .collect();
    let body = json!({
        "weights": [1, 2, 3],
        "curve": { "class": [2, 1], "equation": curve.equation().to_json() },
        "levels": levels,
    });
    w.put(
        "huneke/weights_1_2_3.json",
        "witness-search",
        "derived",
        "frozen output of the level-by-level search along the parabola on the (1,2,3) plane; \
         each witness was re-checked for effectivity, orthogonality, and non-divisibility",
        &body,
    );

    let mut entries = w.entries;
    entries.sort_by(|a, b| a.path.cmp(&b.path));
    let manifest = FixtureManifest { entries };
    let text = format!("{}\n", serde_json::to_string_pretty(&manifest).unwrap());
    fs::write(root.join("manifest.json"), text).unwrap();
    println!("wrote manifest.json");

    let report = verify_manifest(&root).unwrap();
    assert!(report.pass(), "freshly generated corpus must verify: {:?}", report.problems);
    println!("manifest verified: {} fixtures", report.checked);
}
