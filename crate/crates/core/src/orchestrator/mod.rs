// SPDX-License-Identifier: Apache-2.0

//! Helper-guided proving: an initial timed trial, then rounds of ranked
//! helper proofs whose invariants are side-loaded into checkpointed retries
//! under a growing timeout.

mod report;
mod translate;

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clause::Clause;
use crate::helpers::{compile_helper, generate_helpers, CompileError, Compiled, Helper, Manifest};
use crate::netlist::Netlist;
use crate::pdr::{pdr, Checkpoint, PdrError, PdrOptions, PdrStats, ProveResult, Verdict};
use crate::ranker::{Ranker, Status};

pub use report::{HelperRecord, IterationRecord, RunReport, Totals};
pub use translate::{translate, TranslateError, Translation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProverConfig {
    /// Helpers per batch.
    pub nh: usize,
    /// Initial main-engine timeout, seconds.
    pub t0: f64,
    /// Timeout growth factor.
    pub alpha: f64,
    /// Helper proof timeout, seconds.
    pub th: f64,
    /// Global deadline, seconds.
    pub deadline: f64,
    /// Concurrent helper proofs.
    pub jobs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint_dir: Option<PathBuf>,
    #[serde(default)]
    pub debug_frames: bool,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            nh: 10,
            t0: 1.0,
            alpha: 2.0,
            th: 10.0,
            deadline: 3600.0,
            jobs: 1,
            checkpoint_dir: None,
            debug_frames: false,
        }
    }
}

impl ProverConfig {
    pub fn validate(&self) -> Result<(), OrchestratorError> {
        let bad = |what: &str| Err(OrchestratorError::Config(what.to_owned()));
        if self.nh < 1 {
            return bad("nh must be at least 1");
        }
        if self.t0.is_nan() || self.t0 <= 0.0 {
            return bad("t0 must be positive");
        }
        if self.alpha.is_nan() || self.alpha <= 1.0 {
            return bad("alpha must exceed 1");
        }
        if self.th.is_nan() || self.th <= 0.0 {
            return bad("th must be positive");
        }
        if self.deadline.is_nan() || self.deadline <= 0.0 {
            return bad("deadline must be positive");
        }
        if self.jobs < 1 {
            return bad("jobs must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum OrchestratorError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Pdr(#[from] PdrError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone)]
pub enum HelperOutcome {
    /// The helper holds; the invariant is over latches of the compiled
    /// netlist.
    Proved { invariant: Vec<Clause> },
    /// Violated (Counterexample) or undecided within the budget (Unknown).
    Failed { verdict: Verdict },
}

#[derive(Debug, Clone)]
pub struct HelperProof {
    pub compiled: Compiled,
    pub outcome: HelperOutcome,
    pub stats: PdrStats,
}

impl HelperProof {
    pub fn verdict(&self) -> Verdict {
        match self.outcome {
            HelperOutcome::Proved { .. } => Verdict::Proof,
            HelperOutcome::Failed { verdict } => verdict,
        }
    }
}

/// Compiles `helper` and proves its monitor within `th`, with no side-load
/// and no checkpoint.
pub fn prove_helper(netlist: &Netlist, helper: &Helper, th: Duration) -> Result<HelperProof, OrchestratorError> {
    let compiled = compile_helper(netlist, helper)?;
    let opts = PdrOptions { timeout: Some(th), hard_timeout: Some(th), ..Default::default() };
    let r = pdr(&compiled.netlist, compiled.monitor, &opts)?;
    let outcome = match r.verdict {
        Verdict::Proof => HelperOutcome::Proved { invariant: r.invariant },
        v => HelperOutcome::Failed { verdict: v },
    };
    Ok(HelperProof { compiled, outcome, stats: r.stats })
}

/// Proves a batch on up to `jobs` threads; results come back in input order.
fn prove_wave(
    netlist: &Netlist,
    helpers: &[Helper],
    th: Duration,
    jobs: usize,
) -> Vec<(Result<HelperProof, OrchestratorError>, f64)> {
    let run = |h: &Helper| {
        let t = Instant::now();
        let r = prove_helper(netlist, h, th);
        (r, t.elapsed().as_secs_f64())
    };
    if jobs <= 1 || helpers.len() <= 1 {
        return helpers.iter().map(run).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<_>>> = Mutex::new((0..helpers.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs.min(helpers.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(h) = helpers.get(i) else { break };
                let r = run(h);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|r| r.expect("every helper ran")).collect()
}

#[derive(Debug, Clone)]
pub struct Outcome {
    /// Result of the last main-engine call.
    pub result: ProveResult,
    pub report: RunReport,
}

struct Run<'a> {
    netlist: &'a Netlist,
    target: usize,
    cfg: &'a ProverConfig,
    start: Instant,
    deadline: Instant,
}

impl Run<'_> {
    fn remaining(&self) -> Duration {
        self.deadline.saturating_duration_since(Instant::now())
    }

    fn main(
        &self,
        timeout: f64,
        sideload: Vec<Clause>,
        checkpoint: Option<Checkpoint>,
    ) -> Result<ProveResult, OrchestratorError> {
        let opts = PdrOptions {
            timeout: Some(Duration::from_secs_f64(timeout)),
            hard_timeout: Some(self.remaining()),
            sideload,
            checkpoint,
            debug_frames: self.cfg.debug_frames,
        };
        Ok(pdr(self.netlist, self.target, &opts)?)
    }

    fn record(
        &self,
        iteration: usize,
        timeout: f64,
        helpers: Vec<HelperRecord>,
        offered: usize,
        r: &ProveResult,
    ) -> IterationRecord {
        let proved = helpers.iter().filter(|h| h.verdict == Verdict::Proof).count();
        let helper_time: f64 = helpers.iter().map(|h| h.elapsed).sum();
        IterationRecord {
            iteration,
            timeout,
            helpers_proved: proved,
            helpers_failed: helpers.len() - proved,
            helper_sat_queries: helpers.iter().map(|h| h.sat_queries).sum(),
            helpers,
            offered,
            clauses: r.installed.len(),
            rejected: r.sideload.rejected.len(),
            sat_queries: r.stats.sat_queries,
            ctis: r.stats.ctis,
            ctgs: r.stats.ctgs,
            frames: r.stats.frames,
            main_elapsed: r.stats.elapsed,
            elapsed: helper_time + r.stats.elapsed,
            verdict: r.verdict,
            installed: r.installed.clone(),
        }
    }

    /// One round of helper proofs: a batch of `nh`, refilled one for one
    /// on each failure from the same (stale) trial result.
    fn helpers(
        &self,
        ranker: &mut Ranker,
        last: &ProveResult,
    ) -> Result<(Vec<HelperRecord>, Vec<Clause>), OrchestratorError> {
        let mut queue = ranker.get_best_helpers(last, self.cfg.nh);
        let mut records = Vec::new();
        let mut proved: Vec<(String, Translation)> = Vec::new();
        while !queue.is_empty() {
            let th = Duration::from_secs_f64(self.cfg.th).min(self.remaining());
            let results = prove_wave(self.netlist, &queue, th, self.cfg.jobs);
            let mut refill = Vec::new();
            for (h, (res, elapsed)) in queue.iter().zip(results) {
                let p = res?;
                let entry = ranker.entries().iter().find(|e| e.helper.id == h.id).expect("served helper is ranked");
                let mut rec = HelperRecord {
                    id: h.id.clone(),
                    family: h.family,
                    score: entry.score,
                    registers: entry.registers.len(),
                    verdict: p.verdict(),
                    clauses: 0,
                    dropped: 0,
                    sat_queries: p.stats.sat_queries,
                    elapsed,
                };
                match &p.outcome {
                    HelperOutcome::Proved { invariant } => {
                        let t = translate(invariant, &p.compiled.netlist, self.netlist)?;
                        rec.clauses = t.clauses.len();
                        rec.dropped = t.dropped;
                        ranker.set_status(&h.id, Status::Proved);
                        proved.push((h.id.clone(), t));
                    }
                    HelperOutcome::Failed { verdict } => {
                        log::info!("helper {} abandoned ({verdict:?})", h.id);
                        ranker.set_status(&h.id, Status::Failed);
                        if self.remaining() > Duration::ZERO {
                            refill.extend(ranker.get_best_helpers(last, 1));
                        }
                    }
                }
                records.push(rec);
            }
            queue = refill;
        }
        proved.sort_by(|a, b| a.0.cmp(&b.0));
        let mut clauses: Vec<Clause> = Vec::new();
        for (_, t) in proved {
            for c in t.clauses {
                if !clauses.contains(&c) {
                    clauses.push(c);
                }
            }
        }
        Ok((records, clauses))
    }

    fn save_checkpoint(&self, ckp: &Checkpoint) -> Result<Option<String>, OrchestratorError> {
        let Some(dir) = &self.cfg.checkpoint_dir else { return Ok(None) };
        let io = |p: &std::path::Path| {
            let path = p.display().to_string();
            move |source| OrchestratorError::Io { path, source }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        let p = dir.join("checkpoint.json");
        std::fs::write(&p, ckp.to_json()).map_err(io(&p))?;
        Ok(Some(p.display().to_string()))
    }
}

fn decided(v: Verdict) -> bool {
    v != Verdict::Unknown
}

/// Proves output `target`, falling back on helpers from `manifest` when the
/// initial trial times out.
pub fn prove(
    netlist: &Netlist,
    target: usize,
    manifest: &Manifest,
    cfg: &ProverConfig,
) -> Result<Outcome, OrchestratorError> {
    cfg.validate()?;
    let start = Instant::now();
    let run = Run { netlist, target, cfg, start, deadline: start + Duration::from_secs_f64(cfg.deadline) };

    let mut timeout = cfg.t0;
    let mut timeouts = vec![timeout];
    let mut last = run.main(timeout, Vec::new(), None)?;
    let mut iterations = vec![run.record(0, timeout, Vec::new(), 0, &last)];
    let mut ranker: Option<Ranker> = None;
    let mut helpers_generated = 0;
    let mut diagnostics = Vec::new();

    while !decided(last.verdict) && run.remaining() > Duration::ZERO {
        let ranker = ranker.get_or_insert_with(|| {
            let g = generate_helpers(netlist, manifest);
            diagnostics = g.diagnostics.iter().map(|d| format!("{}: {}", d.entry, d.message)).collect();
            helpers_generated = g.helpers.len();
            Ranker::new(netlist, g.helpers)
        });
        let (records, cj) = run.helpers(ranker, &last)?;
        if run.remaining() == Duration::ZERO {
            break;
        }
        timeout *= cfg.alpha;
        timeouts.push(timeout);
        let offered = cj.len();
        let ckp = last.checkpoint.take();
        last = run.main(timeout, cj, ckp)?;
        iterations.push(run.record(iterations.len(), timeout, records, offered, &last));
    }

    let mut checkpoint_path = None;
    if let Some(ckp) = &last.checkpoint {
        checkpoint_path = run.save_checkpoint(ckp)?;
    }
    let totals = Totals::from_iterations(&iterations);
    let report = RunReport {
        target: netlist.output_name(target),
        config: cfg.clone(),
        verdict: last.verdict,
        iterations,
        totals,
        timeouts,
        helpers_generated,
        diagnostics,
        trace_depth: last.trace.as_ref().map(|t| t.depth()),
        invariant_clauses: last.is_proved().then_some(last.invariant.len()),
        checkpoint_path,
        deadline_hit: !decided(last.verdict),
        wall_time: run.start.elapsed().as_secs_f64(),
    };
    Ok(Outcome { result: last, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::helpers::{CmpOp, Family, Operand, Pred};
    use crate::netlist::Lit;

    fn bounded(limit: u64) -> Netlist {
        // 3-bit counter that wraps after `limit`
        let mut n = Netlist::new();
        let bits: Vec<Lit> = (0..3).map(|k| n.add_latch(Some(&format!("i_reg[{k}]")))).collect();
        let at = n.and_all(bits.iter().enumerate().map(|(k, &b)| b.xor(limit >> k & 1 == 0)));
        let mut carry = Lit::TRUE;
        for &b in &bits {
            let inc = n.xor(b, carry);
            carry = n.and(b, carry);
            let next = n.and(inc, !at);
            n.set_next(b.var(), next);
        }
        let top = n.and(bits[2], bits[1]);
        n.add_output(top, Some("bad"));
        n
    }

    fn bound(v: u64) -> Helper {
        Helper {
            id: format!("LoopBound:{v}"),
            family: Family::LoopBound,
            predicate: Pred::cmp(CmpOp::Le, Operand::group("i_reg"), Operand::Const(v)),
            provenance: Vec::new(),
        }
    }

    #[test]
    fn fast_path_skips_helpers() {
        let n = bounded(4);
        let out = prove(&n, 0, &Manifest::default(), &ProverConfig::default()).unwrap();
        assert_eq!(out.result.verdict, Verdict::Proof);
        assert_eq!(out.report.totals.iterations, 1);
        assert_eq!(out.report.totals.helpers_tried, 0);
        assert_eq!(out.report.timeouts, vec![1.0]);
    }

    #[test]
    fn helper_outcomes() {
        let n = bounded(4);
        let p = prove_helper(&n, &bound(4), Duration::from_secs(10)).unwrap();
        let HelperOutcome::Proved { invariant } = &p.outcome else { panic!("{:?}", p.outcome) };
        let t = translate(invariant, &p.compiled.netlist, &n).unwrap();
        assert_eq!(t.dropped, 0);
        assert!(crate::pdr::validate_sideload(&n, &t.clauses).rejected.is_empty());
        let f = prove_helper(&n, &bound(3), Duration::from_secs(10)).unwrap();
        assert_eq!(f.verdict(), Verdict::Counterexample);
    }

    #[test]
    fn config_bounds() {
        assert!(ProverConfig::default().validate().is_ok());
        for bad in [
            ProverConfig { nh: 0, ..Default::default() },
            ProverConfig { alpha: 1.0, ..Default::default() },
            ProverConfig { t0: 0.0, ..Default::default() },
            ProverConfig { th: -1.0, ..Default::default() },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn waves_keep_input_order() {
        let n = bounded(4);
        let hs: Vec<Helper> = (2..7).map(bound).collect();
        let seq = prove_wave(&n, &hs, Duration::from_secs(10), 1);
        let par = prove_wave(&n, &hs, Duration::from_secs(10), 3);
        let v = |r: &[(Result<HelperProof, OrchestratorError>, f64)]| {
            r.iter().map(|(p, _)| p.as_ref().unwrap().verdict()).collect::<Vec<_>>()
        };
        assert_eq!(v(&seq), v(&par));
        assert_eq!(v(&seq)[0], Verdict::Counterexample);
        assert_eq!(v(&seq)[4], Verdict::Proof);
    }
}
