//! Benchmarks for the hideseek engine live in `benches/`; run them with
//! `cargo bench -p hideseek-bench`.
