// SPDX-License-Identifier: Apache-2.0

//! IC3/PDR with CTI logging, side-loading onto F_1 and per-frame
//! checkpoints.
//!
//! Frames are delta-encoded: `frames[k]` holds the clauses whose highest
//! level is k, and F_k is the union of `frames[k..]`. All levels share one
//! solver; a clause at level k is guarded by activation `act_k`, and a query
//! against F_j assumes `act_j ..= act_top`. F_0 is the reset state, guarded
//! by its own activation.
//!
//! Only latches in the fan-in of the target (across time) take part in
//! cubes, so frames and CTIs never mention registers that cannot affect the
//! property.

pub mod check;
pub mod encode;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::clause::{Clause, Cube};
use crate::netlist::{aiger, tfi_registers, Lit, Netlist};
use crate::sat::{SLit, SVar, SolveResult, Solver};
use encode::Encoder;

pub use check::{
    check_invariant, validate_frames, validate_sideload, FrameViolation, InvariantViolation, SideloadCheck,
    SideloadReport,
};

pub const CHECKPOINT_VERSION: u32 = 1;

/// Retracted temporary clauses tolerated before the solver is rebuilt.
const REBUILD_DEAD: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Proof,
    Counterexample,
    Unknown,
}

/// Input sequence from the reset state. `inputs[t]` drives the transition
/// out of step t; `final_inputs` evaluate the target in the last state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub inputs: Vec<Vec<bool>>,
    pub final_inputs: Vec<bool>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("missing `# depth N inputs M` header")]
    Header,
    #[error("line {0}: expected {1} characters of 0/1")]
    Row(usize, usize),
    #[error("expected {0} input rows, found {1}")]
    Rows(usize, usize),
}

impl Trace {
    /// Number of transitions.
    pub fn depth(&self) -> usize {
        self.inputs.len()
    }

    /// Whether simulating the trace raises output `target` in the last step.
    pub fn replays(&self, netlist: &Netlist, target: usize) -> bool {
        match netlist.simulate_with_final(&self.inputs, &self.final_inputs) {
            Ok(steps) => steps.last().is_some_and(|s| s.outputs[target]),
            Err(_) => false,
        }
    }

    /// Text form: a header line, then one row of 0/1 per step including the
    /// final one.
    pub fn to_text(&self) -> String {
        let row = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        let mut s = format!("# depth {} inputs {}\n", self.depth(), self.final_inputs.len());
        for v in self.inputs.iter().chain(std::iter::once(&self.final_inputs)) {
            s.push_str(&row(v));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Trace, TraceError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(TraceError::Header)?;
        let words: Vec<&str> = header.split_whitespace().collect();
        let (depth, width) = match words.as_slice() {
            ["#", "depth", d, "inputs", m] => (
                d.parse::<usize>().map_err(|_| TraceError::Header)?,
                m.parse::<usize>().map_err(|_| TraceError::Header)?,
            ),
            _ => return Err(TraceError::Header),
        };
        let mut rows = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line.len() != width || !line.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(TraceError::Row(i + 1, width));
            }
            rows.push(line.bytes().map(|b| b == b'1').collect::<Vec<bool>>());
        }
        if rows.len() != depth + 1 {
            return Err(TraceError::Rows(depth + 1, rows.len()));
        }
        let final_inputs = rows.pop().unwrap();
        Ok(Trace { inputs: rows, final_inputs })
    }
}

/// A counterexample to induction: a state cube that reaches a bad state or
/// a blocked cube, found while strengthening level `level`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cti {
    pub level: usize,
    pub cube: Cube,
    pub timestamp: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PdrStats {
    pub sat_queries: u64,
    pub ctis: u64,
    pub ctgs: u64,
    /// Frames constructed by this run (restored frames are not counted).
    pub frames: u64,
    pub elapsed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub fingerprint: String,
    pub target: usize,
    /// `frames[k]` holds the clauses stored at level k; level 0 is empty.
    pub frames: Vec<Vec<Clause>>,
    pub ctis: Vec<Cti>,
    pub stats: PdrStats,
}

impl Checkpoint {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Checkpoint, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn top_level(&self) -> usize {
        self.frames.len().saturating_sub(1)
    }
}

/// Hash identifying a netlist and target for checkpoint reuse.
pub fn fingerprint(netlist: &Netlist, target: usize) -> String {
    let mut h = Sha256::new();
    h.update((netlist.num_latches() as u64).to_le_bytes());
    h.update((target as u64).to_le_bytes());
    h.update(aiger::serialize_aiger(netlist));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Default)]
pub struct PdrOptions {
    /// Checked at frame boundaries: once passed, the run returns Unknown
    /// after the current frame completes.
    pub timeout: Option<Duration>,
    /// Checked between proof obligations and inside SAT calls: once passed,
    /// the run returns Unknown with the last completed-frame checkpoint.
    pub hard_timeout: Option<Duration>,
    pub sideload: Vec<Clause>,
    pub checkpoint: Option<Checkpoint>,
    /// Validate the frame sequence with independent SAT checks after every
    /// completed frame.
    pub debug_frames: bool,
}

#[derive(Debug, Clone)]
pub struct ProveResult {
    pub verdict: Verdict,
    /// Proof only; verified inductive together with the property.
    pub invariant: Vec<Clause>,
    /// Counterexample only; replays to the target.
    pub trace: Option<Trace>,
    /// Unknown only.
    pub checkpoint: Option<Checkpoint>,
    pub ctis: Vec<Cti>,
    pub stats: PdrStats,
    pub sideload: SideloadReport,
    /// Side-loaded clauses actually installed at level 1.
    pub installed: Vec<Clause>,
}

impl ProveResult {
    pub fn is_proved(&self) -> bool {
        self.verdict == Verdict::Proof
    }

    pub fn is_cex(&self) -> bool {
        self.verdict == Verdict::Counterexample
    }
}

#[derive(Debug, Error)]
pub enum PdrError {
    #[error("target output {0} does not exist")]
    BadTarget(usize),
    #[error("checkpoint does not match this netlist and target: {0}")]
    CheckpointMismatch(String),
    #[error("internal soundness failure: {0}")]
    Unsound(String),
}

/// Raised when the hard deadline passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interrupted;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strengthen {
    /// No bad state remains at the frontier.
    Blocked,
    /// A counterexample was found.
    Counterexample(Trace),
}

enum RelInd {
    /// Inductive; the reduced cube (still excluding the reset state).
    Unsat(Cube),
    /// A predecessor state with the inputs that lead into the cube.
    Sat(Cube, Vec<bool>),
}

struct Obligation {
    cube: Cube,
    level: usize,
    parent: Option<usize>,
    inputs: Vec<bool>,
}

/// One PDR engine instance.
pub struct Pdr<'a> {
    netlist: &'a Netlist,
    target: usize,
    bad: Lit,
    /// Latches in the target's fan-in, as positive literals.
    coi: Vec<Lit>,
    in_coi: Vec<bool>,
    solver: Solver,
    enc: Encoder,
    init_act: SVar,
    acts: Vec<SVar>,
    frames: Vec<Vec<Clause>>,
    dead: usize,
    lifter: Solver,
    lift_enc: Encoder,
    lift_dead: usize,
    retired_queries: u64,
    extra_queries: u64,
    ctis: Vec<Cti>,
    clock: u64,
    ctgs: u64,
    built: u64,
    start: Instant,
    hard: Option<Instant>,
}

impl<'a> Pdr<'a> {
    /// Engine with frames F_0 and an empty F_1.
    pub fn new(netlist: &'a Netlist, target: usize) -> Result<Self, PdrError> {
        let &bad = netlist.outputs().get(target).ok_or(PdrError::BadTarget(target))?;
        let regs = tfi_registers(netlist, &[bad.var()]);
        let mut in_coi = vec![false; netlist.num_latches()];
        let mut coi = Vec::new();
        for (i, l) in netlist.latches().iter().enumerate() {
            if regs.contains(&l.var) {
                in_coi[i] = true;
                coi.push(l.var.lit());
            }
        }
        let mut solver = Solver::new();
        let enc = Encoder::new(netlist, &mut solver);
        let mut lifter = Solver::new();
        let lift_enc = Encoder::new(netlist, &mut lifter);
        let mut pdr = Pdr {
            netlist,
            target,
            bad,
            coi,
            in_coi,
            solver,
            enc,
            init_act: SVar(0),
            acts: Vec::new(),
            frames: vec![Vec::new(), Vec::new()],
            dead: 0,
            lifter,
            lift_enc,
            lift_dead: 0,
            retired_queries: 0,
            extra_queries: 0,
            ctis: Vec::new(),
            clock: 0,
            ctgs: 0,
            built: 0,
            start: Instant::now(),
            hard: None,
        };
        pdr.build_main();
        Ok(pdr)
    }

    pub fn set_hard_deadline(&mut self, deadline: Option<Instant>) {
        self.hard = deadline;
        self.solver.set_deadline(deadline);
        self.lifter.set_deadline(deadline);
    }

    pub fn frames(&self) -> &[Vec<Clause>] {
        &self.frames
    }

    pub fn top(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn ctis(&self) -> &[Cti] {
        &self.ctis
    }

    pub fn bad(&self) -> Lit {
        self.bad
    }

    pub fn stats(&self) -> PdrStats {
        PdrStats {
            sat_queries: self.retired_queries
                + self.extra_queries
                + self.solver.stats().solves
                + self.lifter.stats().solves,
            ctis: self.ctis.len() as u64,
            ctgs: self.ctgs,
            frames: self.built,
            elapsed: self.start.elapsed().as_secs_f64(),
        }
    }

    fn build_main(&mut self) {
        self.retired_queries += self.solver.stats().solves;
        let mut solver = Solver::new();
        solver.set_deadline(self.hard);
        let mut enc = Encoder::new(self.netlist, &mut solver);
        let init_act = solver.new_var();
        for &l in &self.coi {
            let s = enc.lit(self.netlist, &mut solver, l);
            solver.add_clause(&[init_act.neg(), !s]);
            enc.primed(self.netlist, &mut solver, l);
        }
        enc.lit(self.netlist, &mut solver, self.bad);
        let acts: Vec<SVar> = (0..self.frames.len()).map(|_| solver.new_var()).collect();
        for (k, fr) in self.frames.iter().enumerate() {
            for c in fr {
                let mut lits: Vec<SLit> = c.lits().iter().map(|&l| enc.lit(self.netlist, &mut solver, l)).collect();
                lits.push(acts[k].neg());
                solver.add_clause(&lits);
            }
        }
        self.solver = solver;
        self.enc = enc;
        self.init_act = init_act;
        self.acts = acts;
        self.dead = 0;
    }

    fn rebuild_lifter(&mut self) {
        self.retired_queries += self.lifter.stats().solves;
        let mut lifter = Solver::new();
        lifter.set_deadline(self.hard);
        self.lift_enc = Encoder::new(self.netlist, &mut lifter);
        self.lifter = lifter;
        self.lift_dead = 0;
    }

    fn check_hard(&self) -> Result<(), Interrupted> {
        match self.hard {
            Some(d) if Instant::now() >= d => Err(Interrupted),
            _ => Ok(()),
        }
    }

    fn cur(&mut self, l: Lit) -> SLit {
        self.enc.lit(self.netlist, &mut self.solver, l)
    }

    fn next(&mut self, l: Lit) -> SLit {
        self.enc.primed(self.netlist, &mut self.solver, l)
    }

    fn frame_assumptions(&self, k: usize) -> Vec<SLit> {
        if k == 0 {
            vec![self.init_act.pos()]
        } else {
            self.acts[k..].iter().map(|a| a.pos()).collect()
        }
    }

    fn model_state(&self) -> Cube {
        Cube::new(self.coi.iter().map(|&l| l.xor(!self.enc.model(&self.solver, l.var()))))
    }

    fn model_inputs(&self) -> Vec<bool> {
        self.netlist.inputs().iter().map(|&v| self.enc.model(&self.solver, v)).collect()
    }

    fn log_cti(&mut self, level: usize, cube: &Cube) {
        self.clock += 1;
        self.ctis.push(Cti { level, cube: cube.clone(), timestamp: self.clock });
    }

    /// Appends a new, empty top frame.
    pub fn new_frame(&mut self) {
        self.frames.push(Vec::new());
        let a = self.solver.new_var();
        self.acts.push(a);
        self.built += 1;
    }

    /// Adds `clause` at `level`, dropping clauses it subsumes at or below
    /// that level.
    pub fn add_clause(&mut self, clause: Clause, level: usize) {
        assert!(level >= 1 && level <= self.top(), "clause level out of range");
        for fr in &mut self.frames[1..=level] {
            fr.retain(|c| !clause.subsumes(c));
        }
        let mut lits: Vec<SLit> = clause.lits().iter().map(|&l| self.cur(l)).collect();
        lits.push(self.acts[level].neg());
        self.solver.add_clause(&lits);
        self.frames[level].push(clause);
    }

    /// Is ¬cube inductive relative to F_k? On success the cube is reduced by
    /// the failed assumptions (keeping it disjoint from the reset state);
    /// otherwise the predecessor is returned.
    fn relind(&mut self, cube: &Cube, k: usize) -> Result<RelInd, Interrupted> {
        if self.dead > REBUILD_DEAD {
            self.build_main();
        }
        let mut a = self.frame_assumptions(k);
        let temp = if k > 0 {
            let clause: Vec<SLit> = cube.lits().iter().map(|&l| !self.cur(l)).collect();
            Some(self.solver.add_retractable(&clause))
        } else {
            None
        };
        for &l in cube.lits() {
            let p = self.next(l);
            a.push(p);
        }
        let r = self.solver.solve(&a);
        let out = match r {
            SolveResult::Sat => Ok(RelInd::Sat(self.model_state(), self.model_inputs())),
            SolveResult::Unsat(failed) => {
                let mut kept: Vec<Lit> = failed.iter().filter_map(|&s| self.enc.unprime(self.netlist, s)).collect();
                if kept.iter().all(|l| l.is_negated()) {
                    if let Some(&p) = cube.lits().iter().find(|l| !l.is_negated()) {
                        kept.push(p);
                    }
                }
                Ok(RelInd::Unsat(Cube::new(kept)))
            }
            SolveResult::Unknown => Err(Interrupted),
        };
        if let Some(t) = temp {
            self.solver.retract(t);
            self.dead += 1;
        }
        out
    }

    /// Shrinks a full predecessor `state` to the literals needed so that, under
    /// `inputs`, every state of the result steps into `into` (or raises the
    /// target when `into` is `None`).
    fn lift(&mut self, state: &Cube, inputs: &[bool], into: Option<&Cube>) -> Result<Cube, Interrupted> {
        if self.lift_dead > REBUILD_DEAD {
            self.rebuild_lifter();
        }
        let n = self.netlist;
        let mut a = Vec::new();
        let temp = match into {
            Some(t) => {
                let clause: Vec<SLit> =
                    t.lits().iter().map(|&l| !self.lift_enc.primed(n, &mut self.lifter, l)).collect();
                Some(self.lifter.add_retractable(&clause))
            }
            None => {
                let b = self.lift_enc.lit(n, &mut self.lifter, self.bad);
                a.push(!b);
                None
            }
        };
        for (i, &v) in n.inputs().iter().enumerate() {
            if let Some(s) = self.lift_enc.existing(v) {
                a.push(s.lit(!inputs[i]));
            }
        }
        for &l in state.lits() {
            let s = self.lift_enc.lit(n, &mut self.lifter, l);
            a.push(s);
        }
        let r = self.lifter.solve(&a);
        if let Some(t) = temp {
            self.lifter.retract(t);
            self.lift_dead += 1;
        }
        match r {
            SolveResult::Unsat(failed) => Ok(Cube::new(
                failed
                    .iter()
                    .filter_map(|&s| self.lift_enc.uncurrent(s))
                    .filter(|l| state.lits().binary_search(l).is_ok()),
            )),
            SolveResult::Unknown => Err(Interrupted),
            SolveResult::Sat => unreachable!("predecessor does not step into its successor cube"),
        }
    }

    /// Drops literals from `cube` (with ¬cube inductive relative to
    /// F_{level-1}) while relative induction and reset exclusion survive.
    pub fn generalize(&mut self, cube: &Cube, level: usize) -> Result<Cube, Interrupted> {
        let mut cube = cube.clone();
        for l in cube.lits().to_vec() {
            if cube.len() <= 1 {
                break;
            }
            if !cube.lits().contains(&l) {
                continue;
            }
            let cand = cube.without(l);
            if cand.contains_reset() {
                continue;
            }
            match self.relind(&cand, level - 1)? {
                RelInd::Unsat(core) => cube = core,
                RelInd::Sat(..) => self.ctgs += 1,
            }
        }
        Ok(cube)
    }

    fn blocked(&self, cube: &Cube, level: usize) -> bool {
        self.frames[level..].iter().flatten().any(|c| c.lits().iter().all(|&l| cube.lits().binary_search(&!l).is_ok()))
    }

    fn bad_state(&mut self) -> Result<Option<(Cube, Vec<bool>)>, Interrupted> {
        let mut a = self.frame_assumptions(self.top());
        let b = self.cur(self.bad);
        a.push(b);
        match self.solver.solve(&a) {
            SolveResult::Sat => {
                let (state, inputs) = (self.model_state(), self.model_inputs());
                let cube = self.lift(&state, &inputs, None)?;
                Ok(Some((cube, inputs)))
            }
            SolveResult::Unsat(_) => Ok(None),
            SolveResult::Unknown => Err(Interrupted),
        }
    }

    fn trace_from(obs: &[Obligation], mut idx: usize) -> Trace {
        let mut chain = vec![idx];
        while let Some(p) = obs[idx].parent {
            chain.push(p);
            idx = p;
        }
        let last = chain.pop().unwrap();
        Trace { inputs: chain.iter().map(|&i| obs[i].inputs.clone()).collect(), final_inputs: obs[last].inputs.clone() }
    }

    /// Blocks every bad state at the top frame, or returns a counterexample.
    pub fn strengthen(&mut self) -> Result<Strengthen, Interrupted> {
        let top = self.top();
        loop {
            self.check_hard()?;
            let Some((cube, inputs)) = self.bad_state()? else {
                return Ok(Strengthen::Blocked);
            };
            self.log_cti(top, &cube);
            let mut obs = vec![Obligation { cube, level: top, parent: None, inputs }];
            if obs[0].cube.contains_reset() {
                return Ok(Strengthen::Counterexample(Self::trace_from(&obs, 0)));
            }
            let mut heap = BinaryHeap::new();
            let mut stamp = 0u64;
            heap.push(Reverse((top, stamp, 0usize)));
            while let Some(Reverse((level, _, idx))) = heap.pop() {
                self.check_hard()?;
                stamp += 1;
                let cube = obs[idx].cube.clone();
                if self.blocked(&cube, level) {
                    if level < top {
                        obs[idx].level = level + 1;
                        heap.push(Reverse((level + 1, stamp, idx)));
                    }
                    continue;
                }
                match self.relind(&cube, level - 1)? {
                    RelInd::Unsat(core) => {
                        let g = self.generalize(&core, level)?;
                        let mut j = level;
                        while j < top {
                            match self.relind(&g, j)? {
                                RelInd::Unsat(_) => j += 1,
                                RelInd::Sat(..) => break,
                            }
                        }
                        self.add_clause(g.negate(), j);
                        if j < top {
                            obs[idx].level = j + 1;
                            heap.push(Reverse((j + 1, stamp, idx)));
                        }
                    }
                    RelInd::Sat(state, inputs) => {
                        let pred = self.lift(&state, &inputs, Some(&cube))?;
                        self.log_cti(level - 1, &pred);
                        obs.push(Obligation { cube: pred, level: level - 1, parent: Some(idx), inputs });
                        let p = obs.len() - 1;
                        if level == 1 || obs[p].cube.contains_reset() {
                            return Ok(Strengthen::Counterexample(Self::trace_from(&obs, p)));
                        }
                        heap.push(Reverse((level - 1, stamp, p)));
                        stamp += 1;
                        heap.push(Reverse((level, stamp, idx)));
                    }
                }
            }
        }
    }

    /// Pushes clauses forward, level by level. Returns the level k whose
    /// delta became empty (F_k = F_{k+1}), if any.
    pub fn propagate(&mut self) -> Result<Option<usize>, Interrupted> {
        let top = self.top();
        for k in 1..top {
            for c in self.frames[k].clone() {
                self.check_hard()?;
                if !self.frames[k].contains(&c) {
                    continue;
                }
                let mut a = self.frame_assumptions(k);
                for &l in c.lits() {
                    let p = self.next(!l);
                    a.push(p);
                }
                match self.solver.solve(&a) {
                    SolveResult::Unsat(_) => {
                        self.frames[k].retain(|x| x != &c);
                        self.add_clause(c, k + 1);
                    }
                    SolveResult::Sat => {}
                    SolveResult::Unknown => return Err(Interrupted),
                }
            }
            if self.frames[k].is_empty() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// The clauses of F_{k+1} after a fixpoint at k, verified against the
    /// three inductive-invariant conditions.
    pub fn extract_invariant(&mut self, k: usize) -> Result<Vec<Clause>, PdrError> {
        let mut inv: Vec<Clause> = self.frames[k + 1..].iter().flatten().cloned().collect();
        inv.sort();
        match check_invariant(self.netlist, self.bad, &inv) {
            Ok(q) => {
                self.extra_queries += q;
                Ok(inv)
            }
            Err(e) => Err(PdrError::Unsound(e.to_string())),
        }
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            version: CHECKPOINT_VERSION,
            fingerprint: fingerprint(self.netlist, self.target),
            target: self.target,
            frames: self.frames.clone(),
            ctis: self.ctis.clone(),
            stats: self.stats(),
        }
    }

    /// Replaces the frames by those of `ckp`.
    pub fn restore(&mut self, ckp: &Checkpoint) -> Result<(), PdrError> {
        if ckp.version != CHECKPOINT_VERSION {
            return Err(PdrError::CheckpointMismatch(format!("version {}", ckp.version)));
        }
        if ckp.target != self.target || ckp.fingerprint != fingerprint(self.netlist, self.target) {
            return Err(PdrError::CheckpointMismatch("fingerprint differs".into()));
        }
        if ckp.frames.len() < 2 || !ckp.frames[0].is_empty() {
            return Err(PdrError::CheckpointMismatch("malformed frame list".into()));
        }
        for c in ckp.frames.iter().flatten() {
            if c.lits().iter().any(|l| !self.netlist.is_latch(l.var())) {
                return Err(PdrError::CheckpointMismatch(format!("clause {c} is not over latches")));
            }
        }
        self.frames = ckp.frames.clone();
        self.build_main();
        Ok(())
    }

    /// Validates `clauses` and installs the survivors at level 1. Valid
    /// clauses over latches outside the target's fan-in cannot influence the
    /// run and are not installed.
    pub fn sideload(&mut self, clauses: &[Clause]) -> (SideloadReport, Vec<Clause>) {
        let report = validate_sideload(self.netlist, clauses);
        self.extra_queries += report.sat_queries;
        let mut installed = Vec::new();
        for c in &report.accepted {
            if c.is_tautology() {
                continue;
            }
            let relevant = c.lits().iter().all(|l| self.netlist.latch_index(l.var()).is_some_and(|i| self.in_coi[i]));
            if relevant && !installed.contains(c) {
                self.add_clause(c.clone(), 1);
                installed.push(c.clone());
            }
        }
        (report, installed)
    }

    /// Whether the reset state already raises the target; returns the inputs.
    fn reset_violation(&mut self) -> Result<Option<Vec<bool>>, Interrupted> {
        let b = self.cur(self.bad);
        match self.solver.solve(&[self.init_act.pos(), b]) {
            SolveResult::Sat => Ok(Some(self.model_inputs())),
            SolveResult::Unsat(_) => Ok(None),
            SolveResult::Unknown => Err(Interrupted),
        }
    }
}

/// Runs PDR on output `target` of `netlist`.
pub fn pdr(netlist: &Netlist, target: usize, opts: &PdrOptions) -> Result<ProveResult, PdrError> {
    let mut e = Pdr::new(netlist, target)?;
    e.set_hard_deadline(opts.hard_timeout.map(|d| e.start + d));
    if let Some(ckp) = &opts.checkpoint {
        e.restore(ckp)?;
    }
    let (sideload, installed) = e.sideload(&opts.sideload);
    let soft = opts.timeout.map(|d| e.start + d);

    let mut result = ProveResult {
        verdict: Verdict::Unknown,
        invariant: Vec::new(),
        trace: None,
        checkpoint: None,
        ctis: Vec::new(),
        stats: PdrStats::default(),
        sideload,
        installed,
    };
    let mut last = e.checkpoint();
    let finish = |e: &Pdr, mut r: ProveResult| {
        r.ctis = e.ctis.clone();
        r.stats = e.stats();
        r
    };

    let outcome = (|| -> Result<Result<(Verdict, Vec<Clause>, Option<Trace>), PdrError>, Interrupted> {
        if let Some(inputs) = e.reset_violation()? {
            let t = Trace { inputs: Vec::new(), final_inputs: inputs };
            return Ok(Ok((Verdict::Counterexample, Vec::new(), Some(t))));
        }
        loop {
            match e.strengthen()? {
                Strengthen::Counterexample(t) => return Ok(Ok((Verdict::Counterexample, Vec::new(), Some(t)))),
                Strengthen::Blocked => {}
            }
            e.new_frame();
            if let Some(k) = e.propagate()? {
                return Ok(e.extract_invariant(k).map(|inv| (Verdict::Proof, inv, None)));
            }
            if opts.debug_frames {
                if let Err(v) = validate_frames(netlist, e.bad, &e.frames) {
                    return Ok(Err(PdrError::Unsound(format!("frame check failed: {v:?}"))));
                }
            }
            last = e.checkpoint();
            log::debug!("frame {} done, {} ctis", e.top(), e.ctis.len());
            if soft.is_some_and(|s| Instant::now() >= s) {
                return Ok(Ok((Verdict::Unknown, Vec::new(), None)));
            }
        }
    })();

    match outcome {
        Err(Interrupted) => {
            result.checkpoint = Some(last);
            Ok(finish(&e, result))
        }
        Ok(Err(err)) => Err(err),
        Ok(Ok((verdict, invariant, trace))) => {
            if let Some(t) = &trace {
                if !t.replays(netlist, target) {
                    return Err(PdrError::Unsound("counterexample trace does not replay".into()));
                }
            }
            result.verdict = verdict;
            result.invariant = invariant;
            result.trace = trace;
            if verdict == Verdict::Unknown {
                result.checkpoint = Some(e.checkpoint());
            }
            Ok(finish(&e, result))
        }
    }
}
