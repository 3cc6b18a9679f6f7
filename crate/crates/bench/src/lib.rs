//! Criterion benchmarks for the group engine live in `benches/`.
