// SPDX-License-Identifier: Apache-2.0

//! Benchmark specifications, generation with oracle ground truth, and the
//! on-disk suite layout.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::golden::GoldenHelper;
use super::oracle::{oracle, ORACLE_MAX_INPUTS, ORACLE_MAX_LATCHES};
use super::{families, golden, random_control};
use crate::helpers::{compile_helper, generate_helpers, Manifest};
use crate::netlist::aiger::{parse_aiger, serialize_aiger, AigerError};
use crate::netlist::Netlist;
use crate::pdr::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum BenchSpec {
    BoundedCounter { trip: u64 },
    Fifo { depth: u64, pops: bool },
    PipelinedLoopPair { stages: usize, trip: u64 },
    FunctionChain { length: usize },
    RandomControl { latches: usize, inputs: usize, seed: u64 },
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Cap(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Aiger { path: String, source: AigerError },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

/// Ground truth recorded next to each model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truth {
    /// Target output symbol.
    pub target: String,
    pub verdict: Verdict,
    /// Shortest counterexample length in transitions.
    pub depth: Option<usize>,
    pub reachable_states: u64,
    pub helpers: Vec<GoldenHelper>,
}

#[derive(Debug, Clone)]
pub struct Bench {
    pub name: String,
    pub spec: BenchSpec,
    pub netlist: Netlist,
    pub manifest: Manifest,
    pub truth: Truth,
}

fn cap(ok: bool, what: impl FnOnce() -> String) -> Result<(), BenchError> {
    if ok {
        Ok(())
    } else {
        Err(BenchError::Cap(what()))
    }
}

impl BenchSpec {
    pub fn name(&self) -> String {
        match *self {
            BenchSpec::BoundedCounter { trip } => format!("bounded_counter_{trip}"),
            BenchSpec::Fifo { depth, pops: true } => format!("fifo_{depth}"),
            BenchSpec::Fifo { depth, pops: false } => format!("fifo_{depth}_nopop"),
            BenchSpec::PipelinedLoopPair { stages, trip } => format!("pipelined_loop_pair_{stages}x{trip}"),
            BenchSpec::FunctionChain { length } => format!("function_chain_{length}"),
            BenchSpec::RandomControl { latches, inputs, seed } => format!("random_control_{latches}x{inputs}_s{seed}"),
        }
    }

    /// Latch count of the generated model.
    pub fn latches(&self) -> usize {
        let bl = |v: u64| families::bit_len(v);
        match *self {
            BenchSpec::BoundedCounter { trip } => 3 + bl(trip) + 4,
            BenchSpec::Fifo { depth, .. } => bl(depth) + 2 + depth as usize,
            BenchSpec::PipelinedLoopPair { stages, trip } => 4 + 2 * bl(trip) + 4 * stages,
            BenchSpec::FunctionChain { length } => 4 * length + 3,
            BenchSpec::RandomControl { latches, .. } => latches,
        }
    }

    /// Checks the size caps. Every family stays within the explicit-state
    /// oracle's latch budget so that ground truth is always exact.
    pub fn validate(&self) -> Result<(), BenchError> {
        let name = self.name();
        match *self {
            BenchSpec::BoundedCounter { trip } => {
                cap((1..=4095).contains(&trip), || format!("{name}: trip count must be in 1..=4095"))?
            }
            BenchSpec::Fifo { depth, .. } => {
                cap((1..=16).contains(&depth), || format!("{name}: depth must be in 1..=16"))?
            }
            BenchSpec::PipelinedLoopPair { stages, trip } => {
                cap(stages >= 2, || format!("{name}: at least 2 stages"))?;
                cap(trip >= stages as u64, || format!("{name}: trip count must be at least the stage count"))?;
            }
            BenchSpec::FunctionChain { length } => {
                cap((2..=5).contains(&length), || format!("{name}: length must be in 2..=5"))?
            }
            BenchSpec::RandomControl { latches, inputs, .. } => {
                cap(latches >= 2, || format!("{name}: at least 2 latches"))?;
                cap((1..=ORACLE_MAX_INPUTS).contains(&inputs), || {
                    format!("{name}: inputs must be in 1..={ORACLE_MAX_INPUTS}")
                })?;
            }
        }
        let l = self.latches();
        cap(l <= ORACLE_MAX_LATCHES, || format!("{name}: {l} latches exceed the budget of {ORACLE_MAX_LATCHES}"))
    }

    /// Smallest and typical instances of each family.
    pub fn family_sizes() -> Vec<BenchSpec> {
        vec![
            BenchSpec::BoundedCounter { trip: 1 },
            BenchSpec::BoundedCounter { trip: 200 },
            BenchSpec::Fifo { depth: 1, pops: true },
            BenchSpec::Fifo { depth: 8, pops: true },
            BenchSpec::PipelinedLoopPair { stages: 2, trip: 2 },
            BenchSpec::PipelinedLoopPair { stages: 3, trip: 3 },
            BenchSpec::FunctionChain { length: 2 },
            BenchSpec::FunctionChain { length: 3 },
            BenchSpec::RandomControl { latches: 2, inputs: 1, seed: 0 },
            BenchSpec::RandomControl { latches: 12, inputs: 2, seed: 1 },
        ]
    }

    /// The shipped benchmark suite.
    pub fn default_suite() -> Vec<BenchSpec> {
        vec![
            BenchSpec::BoundedCounter { trip: 8 },
            BenchSpec::BoundedCounter { trip: 200 },
            BenchSpec::Fifo { depth: 4, pops: true },
            BenchSpec::Fifo { depth: 8, pops: false },
            BenchSpec::PipelinedLoopPair { stages: 2, trip: 2 },
            BenchSpec::PipelinedLoopPair { stages: 3, trip: 3 },
            BenchSpec::FunctionChain { length: 2 },
            BenchSpec::FunctionChain { length: 3 },
            BenchSpec::RandomControl { latches: 10, inputs: 2, seed: 1 },
            BenchSpec::RandomControl { latches: 12, inputs: 2, seed: 2 },
            BenchSpec::RandomControl { latches: 14, inputs: 3, seed: 3 },
            BenchSpec::RandomControl { latches: 16, inputs: 2, seed: 4 },
        ]
    }
}

/// Builds the model, its golden manifest and helper list, and computes the
/// ground truth by explicit-state search.
pub fn gen(spec: &BenchSpec) -> Result<Bench, BenchError> {
    spec.validate()?;
    let (netlist, manifest, mut helpers) = match *spec {
        BenchSpec::BoundedCounter { trip } => {
            let (n, m) = families::bounded_counter(trip, families::bit_len(trip));
            (n, m, golden::bounded_counter(trip))
        }
        BenchSpec::Fifo { depth, pops } => {
            let (n, m) = families::fifo(depth, pops);
            (n, m, golden::fifo(depth))
        }
        BenchSpec::PipelinedLoopPair { stages, trip } => {
            let (n, m) = families::pipelined_loop_pair(stages, trip);
            (n, m, golden::pipelined_loop_pair(stages, trip))
        }
        BenchSpec::FunctionChain { length } => {
            let (n, m) = families::function_chain(length);
            (n, m, golden::function_chain(length))
        }
        BenchSpec::RandomControl { latches, inputs, seed } => {
            (random_control(latches, inputs, seed), Manifest::default(), Vec::new())
        }
    };
    let result = oracle(&netlist, 0).map_err(|e| BenchError::Cap(format!("{}: {e}", spec.name())))?;

    let generated = generate_helpers(&netlist, &manifest).helpers;
    for g in &mut helpers {
        let Some(helper) = generated.iter().find(|h| h.id == g.id) else { continue };
        let Ok(c) = compile_helper(&netlist, helper) else { continue };
        if let Ok(r) = oracle(&c.netlist, c.monitor) {
            g.valid = Some(r.verdict == Verdict::Proof);
        }
    }

    let truth = Truth {
        target: netlist.output_name(0),
        verdict: result.verdict,
        depth: result.depth,
        reachable_states: result.reachable_states,
        helpers,
    };
    Ok(Bench { name: spec.name(), spec: spec.clone(), netlist, manifest, truth })
}

/// One line of the suite descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub name: String,
    pub spec: BenchSpec,
    pub latches: usize,
    pub target: String,
    pub verdict: Verdict,
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suite {
    pub benchmarks: Vec<SuiteEntry>,
}

pub const MODEL_FILE: &str = "model.aag";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const TRUTH_FILE: &str = "truth.json";
pub const SUITE_FILE: &str = "suite.json";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> BenchError + '_ {
    move |source| BenchError::Io { path: path.display().to_string(), source }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Writes `<dir>/<name>/{model.aag, manifest.json, truth.json}`.
pub fn write_bench(dir: &Path, bench: &Bench) -> Result<(), BenchError> {
    let d = dir.join(&bench.name);
    fs::create_dir_all(&d).map_err(io_err(&d))?;
    let files = [
        (MODEL_FILE, serialize_aiger(&bench.netlist)),
        (MANIFEST_FILE, pretty(&bench.manifest).into_bytes()),
        (TRUTH_FILE, pretty(&bench.truth).into_bytes()),
    ];
    for (name, bytes) in files {
        let p = d.join(name);
        fs::write(&p, bytes).map_err(io_err(&p))?;
    }
    Ok(())
}

/// Generates and writes every spec plus the `suite.json` descriptor.
pub fn write_suite(dir: &Path, specs: &[BenchSpec]) -> Result<Suite, BenchError> {
    let mut suite = Suite::default();
    for spec in specs {
        let b = gen(spec)?;
        write_bench(dir, &b)?;
        suite.benchmarks.push(SuiteEntry {
            name: b.name.clone(),
            spec: b.spec.clone(),
            latches: b.netlist.num_latches(),
            target: b.truth.target.clone(),
            verdict: b.truth.verdict,
            depth: b.truth.depth,
        });
    }
    let p = dir.join(SUITE_FILE);
    fs::write(&p, pretty(&suite)).map_err(io_err(&p))?;
    Ok(suite)
}

fn read_json<T: for<'de> Deserialize<'de>>(p: &Path) -> Result<T, BenchError> {
    let text = fs::read_to_string(p).map_err(io_err(p))?;
    serde_json::from_str(&text).map_err(|source| BenchError::Json { path: p.display().to_string(), source })
}

/// A benchmark directory as written by [`write_bench`].
pub fn load_bench(dir: &Path) -> Result<(Netlist, Manifest, Truth), BenchError> {
    let p = dir.join(MODEL_FILE);
    let bytes = fs::read(&p).map_err(io_err(&p))?;
    let netlist = parse_aiger(&bytes).map_err(|source| BenchError::Aiger { path: p.display().to_string(), source })?;
    Ok((netlist, read_json(&dir.join(MANIFEST_FILE))?, read_json(&dir.join(TRUTH_FILE))?))
}

pub fn load_suite(dir: &Path) -> Result<Suite, BenchError> {
    read_json(&dir.join(SUITE_FILE))
}
