//! Criterion benchmarks for the operator and quadrature layers; see `benches/`.
