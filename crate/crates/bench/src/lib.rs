//! Criterion benchmarks for `nilgenus`; see `benches/`.
