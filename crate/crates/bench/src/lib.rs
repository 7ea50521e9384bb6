//! Criterion benchmarks for `gsc-core`. See `benches/core.rs`.
