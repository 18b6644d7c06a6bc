//! Benchmarks for element arithmetic and ball enumeration; see `benches/`.
