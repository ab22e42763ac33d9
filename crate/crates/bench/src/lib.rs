//! Criterion benchmarks for the seawsn models; see `benches/`.
