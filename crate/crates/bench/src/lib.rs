//! Criterion benchmarks for `roughlim-core`; the benchmarks live in `benches/`.
