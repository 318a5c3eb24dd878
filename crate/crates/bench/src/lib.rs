//! Criterion benchmarks for the zip tree; see `benches/`.
