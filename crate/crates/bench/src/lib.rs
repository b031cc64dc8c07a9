//! Criterion benchmarks for belyi-core live in benches/.
