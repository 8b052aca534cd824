//! Criterion benchmarks for `fermient`; see `benches/`.
