//! Criterion benchmarks for `qsearch-core`; see `benches/`.
