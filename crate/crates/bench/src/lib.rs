//! Criterion benchmarks for `permwig`; see `benches/`.
