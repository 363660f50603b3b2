// SPDX-License-Identifier: Apache-2.0

//! Per-iteration run statistics and their rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::clause::Clause;
use crate::helpers::Family;
use crate::pdr::Verdict;

use super::ProverConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HelperRecord {
    pub id: String,
    pub family: Family,
    /// Rank score when served.
    pub score: u64,
    pub registers: usize,
    /// Proof means the helper holds; anything else abandons it.
    pub verdict: Verdict,
    /// Clauses surviving translation.
    pub clauses: usize,
    /// Invariant clauses over monitor-only latches.
    pub dropped: usize,
    pub sat_queries: u64,
    pub elapsed: f64,
}

/// One call of the main engine, plus the helper work that preceded it.
/// Iteration 0 is the initial trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub timeout: f64,
    pub helpers: Vec<HelperRecord>,
    pub helpers_proved: usize,
    pub helpers_failed: usize,
    /// Size of the translated clause set offered for side-loading.
    pub offered: usize,
    /// Side-loaded clauses installed at F_1 (CL).
    pub clauses: usize,
    pub rejected: usize,
    /// Main engine SAT calls (SAT.Q).
    pub sat_queries: u64,
    pub helper_sat_queries: u64,
    /// CTIs of the main engine (CTI).
    pub ctis: u64,
    pub ctgs: u64,
    /// Frames built by the main engine (FR).
    pub frames: u64,
    pub main_elapsed: f64,
    /// Helper proofs plus main engine.
    pub elapsed: f64,
    pub verdict: Verdict,
    #[serde(skip)]
    pub installed: Vec<Clause>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    /// Main engine calls (IT).
    pub iterations: usize,
    pub helpers_tried: usize,
    pub helpers_proved: usize,
    pub helpers_failed: usize,
    pub clauses: usize,
    pub sat_queries: u64,
    pub helper_sat_queries: u64,
    pub ctis: u64,
    pub ctgs: u64,
    pub frames: u64,
    pub elapsed: f64,
}

impl Totals {
    pub fn from_iterations(its: &[IterationRecord]) -> Totals {
        let mut t = Totals { iterations: its.len(), ..Default::default() };
        for r in its {
            t.helpers_tried += r.helpers.len();
            t.helpers_proved += r.helpers_proved;
            t.helpers_failed += r.helpers_failed;
            t.clauses += r.clauses;
            t.sat_queries += r.sat_queries;
            t.helper_sat_queries += r.helper_sat_queries;
            t.ctis += r.ctis;
            t.ctgs += r.ctgs;
            t.frames += r.frames;
            t.elapsed += r.elapsed;
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub target: String,
    pub config: ProverConfig,
    pub verdict: Verdict,
    pub iterations: Vec<IterationRecord>,
    pub totals: Totals,
    /// Main engine timeouts in call order.
    pub timeouts: Vec<f64>,
    pub helpers_generated: usize,
    pub diagnostics: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant_clauses: Option<usize>,
    /// Latest checkpoint file, when the run ended Unknown and a checkpoint
    /// directory was configured.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint_path: Option<String>,
    pub deadline_hit: bool,
    pub wall_time: f64,
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Proof => "proof",
        Verdict::Counterexample => "cex",
        Verdict::Unknown => "unknown",
    }
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Totals recomputed from the iteration records.
    pub fn recomputed(&self) -> Totals {
        Totals::from_iterations(&self.iterations)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>3} {:>8} {:>7} {:>6} {:>5} {:>8} {:>7} {:>5} {:>9} {:>8}",
            "IT", "T", "HELPERS", "PROVED", "CL", "SAT.Q", "CTI", "FR", "TIME", "VERDICT"
        );
        for r in &self.iterations {
            let _ = writeln!(
                s,
                "{:>3} {:>8.3} {:>7} {:>6} {:>5} {:>8} {:>7} {:>5} {:>9.3} {:>8}",
                r.iteration,
                r.timeout,
                r.helpers.len(),
                r.helpers_proved,
                r.clauses,
                r.sat_queries,
                r.ctis,
                r.frames,
                r.elapsed,
                verdict_str(r.verdict)
            );
        }
        let t = &self.totals;
        let _ = writeln!(
            s,
            "{:>3} {:>8} {:>7} {:>6} {:>5} {:>8} {:>7} {:>5} {:>9.3} {:>8}",
            t.iterations,
            "total",
            t.helpers_tried,
            t.helpers_proved,
            t.clauses,
            t.sat_queries,
            t.ctis,
            t.frames,
            t.elapsed,
            verdict_str(self.verdict)
        );
        s
    }
}
