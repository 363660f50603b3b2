// SPDX-License-Identifier: Apache-2.0

//! Synthetic HLS-shaped benchmarks with oracle-computed ground truth.

pub mod families;
mod golden;
mod oracle;
mod random;
mod suite;

pub use golden::GoldenHelper;
pub use oracle::{oracle, OracleError, OracleResult, ORACLE_MAX_INPUTS, ORACLE_MAX_LATCHES};
pub use random::random_control;
pub use suite::{
    gen, load_bench, load_suite, write_bench, write_suite, Bench, BenchError, BenchSpec, Suite, SuiteEntry, Truth,
    MANIFEST_FILE, MODEL_FILE, SUITE_FILE, TRUTH_FILE,
};
