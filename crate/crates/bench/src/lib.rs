//! Criterion benchmarks for `dcp-core`; see `benches/`.
