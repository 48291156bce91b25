//! Criterion benchmarks for `hatcycle-core`; run with `cargo bench -p hatcycle-bench`.
