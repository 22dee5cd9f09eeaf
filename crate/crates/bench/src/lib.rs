//! Criterion benchmarks for the field, the hitting-set stream and the testers.
//! Run with `cargo bench -p pitkit-bench`.
