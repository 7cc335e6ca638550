//! Criterion benchmarks for `usvpath-core`; see `benches/`.
