//! Criterion benchmarks for `blochiso-core`; see `benches/kernels.rs`.
