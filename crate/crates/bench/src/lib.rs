//! Benchmarks for `influence-core`; see `benches/core.rs`.
