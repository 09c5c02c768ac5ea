//! Wall-clock tracking for the kernels that dominate suite runtime:
//! Smith normal form, the critical-degree determinant, the polynomial
//! identity battery, and projectivity certification.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mdv_core::exactmath::snf;
use mdv_core::fan::{certify_projective, fan_hirzebruch, fan_nonprojective_cube};
use mdv_core::gnwpoly::verify_identities;
use mdv_core::lmchain::{build_chain, default_kernels};
use mdv_core::wps::d1_determinant;
use mdv_core::IntMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(n: usize, seed: u64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<i64>> =
        (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
    IntMatrix::from_rows(&rows)
}

fn bench_snf(c: &mut Criterion) {
    let matrix = random_matrix(12, 7);
    c.bench_function("snf_12x12", |b| b.iter(|| black_box(snf(black_box(&matrix)))));
}

fn bench_determinant(c: &mut Criterion) {
    c.bench_function("d1_determinant_m40", |b| {
        b.iter(|| black_box(d1_determinant(black_box(40)).unwrap()))
    });
}

fn bench_identities(c: &mut Criterion) {
    c.bench_function("gnw_identities_m11", |b| {
        b.iter(|| black_box(verify_identities(black_box(11)).unwrap()))
    });
}

fn bench_certify(c: &mut Criterion) {
    let hirzebruch = fan_hirzebruch(3);
    c.bench_function("certify_hirzebruch", |b| {
        b.iter(|| black_box(certify_projective(black_box(&hirzebruch)).unwrap()))
    });
    let cube = fan_nonprojective_cube();
    c.bench_function("refute_cube", |b| {
        b.iter(|| black_box(certify_projective(black_box(&cube)).unwrap()))
    });
    let mut group = c.benchmark_group("chain");
    group.sample_size(20);
    group.bench_function("build_chain_n7", |bench| {
        bench.iter(|| black_box(build_chain(7, &default_kernels(7), 0).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_snf, bench_determinant, bench_identities, bench_certify);
criterion_main!(benches);
