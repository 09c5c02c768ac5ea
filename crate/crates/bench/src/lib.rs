//! Benchmark-only crate; the timed kernels live in `benches/`.
