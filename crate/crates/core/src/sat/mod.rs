// SPDX-License-Identifier: Apache-2.0

//! Incremental CDCL SAT solver.
//!
//! - two watched literals with blocker literals
//! - first-UIP conflict analysis with local clause minimization
//! - VSIDS branching, phase saving, Luby restarts
//! - activity-based learnt clause deletion
//! - solving under assumptions with failed-assumption extraction
//! - retractable clauses guarded by activation literals
//!
//! Resource limits are counted in conflicts; a wall-clock deadline can be
//! added on top and is polled every few hundred conflicts.

mod heap;

use std::fmt;
use std::io::{self, Write};
use std::ops::Not;
use std::time::Instant;

use heap::VarHeap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SVar(pub u32);

impl SVar {
    pub fn pos(self) -> SLit {
        SLit(self.0 << 1)
    }

    pub fn neg(self) -> SLit {
        SLit(self.0 << 1 | 1)
    }

    pub fn lit(self, negated: bool) -> SLit {
        SLit(self.0 << 1 | negated as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SLit(u32);

impl SLit {
    pub fn var(self) -> SVar {
        SVar(self.0 >> 1)
    }

    pub fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    fn idx(self) -> usize {
        self.0 as usize
    }

    /// DIMACS integer (1-based, sign for polarity).
    pub fn to_dimacs(self) -> i64 {
        let v = self.var().0 as i64 + 1;
        if self.is_neg() {
            -v
        } else {
            v
        }
    }
}

impl Not for SLit {
    type Output = SLit;
    fn not(self) -> SLit {
        SLit(self.0 ^ 1)
    }
}

impl fmt::Display for SLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Activation literal guarding a retractable clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Activation(SVar);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    /// Satisfiable; the model is available through [`Solver::model_value`].
    Sat,
    /// Unsatisfiable; the subset of the caller's assumptions that is
    /// sufficient for unsatisfiability (empty when the clause database alone
    /// is unsatisfiable).
    Unsat(Vec<SLit>),
    /// Budget exhausted.
    Unknown,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat)
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveResult::Unsat(_))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolverStats {
    pub solves: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub reductions: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LBool {
    Undef,
    True,
    False,
}

#[derive(Debug, Clone)]
struct Clause {
    lits: Vec<SLit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: SLit,
}

#[derive(Debug, Clone, Copy)]
struct VarData {
    reason: Option<u32>,
    level: u32,
}

enum SearchOutcome {
    Sat,
    Unsat(Vec<SLit>),
    Restart,
    Budget,
}

const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;
const RESTART_UNIT: f64 = 100.0;
const DEADLINE_POLL: u64 = 256;

/// CDCL solver instance. Single-threaded; not `Sync` by use, though it may be
/// moved between threads.
#[derive(Debug, Clone)]
pub struct Solver {
    ok: bool,
    clauses: Vec<Clause>,
    free_crefs: Vec<u32>,
    num_learnts: usize,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<LBool>,
    vardata: Vec<VarData>,
    phase: Vec<bool>,
    activity: Vec<f64>,
    var_inc: f64,
    clause_inc: f64,
    order: VarHeap,
    trail: Vec<SLit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    seen: Vec<bool>,
    model: Vec<bool>,
    active_acts: Vec<SVar>,
    max_learnts: f64,
    simp_trail: usize,
    stats: SolverStats,
    conflict_budget: Option<u64>,
    deadline: Option<Instant>,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            ok: true,
            clauses: Vec::new(),
            free_crefs: Vec::new(),
            num_learnts: 0,
            watches: Vec::new(),
            assigns: Vec::new(),
            vardata: Vec::new(),
            phase: Vec::new(),
            activity: Vec::new(),
            var_inc: 1.0,
            clause_inc: 1.0,
            order: VarHeap::default(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            seen: Vec::new(),
            model: Vec::new(),
            active_acts: Vec::new(),
            max_learnts: 2000.0,
            simp_trail: 0,
            stats: SolverStats::default(),
            conflict_budget: None,
            deadline: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.iter().filter(|c| !c.deleted && !c.learnt).count()
    }

    pub fn num_learnts(&self) -> usize {
        self.num_learnts
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    /// False once the clause database is unsatisfiable on its own.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    /// Per-call conflict limit; `None` means unlimited.
    pub fn set_conflict_budget(&mut self, budget: Option<u64>) {
        self.conflict_budget = budget;
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    pub fn new_var(&mut self) -> SVar {
        let v = SVar(self.assigns.len() as u32);
        self.assigns.push(LBool::Undef);
        self.vardata.push(VarData { reason: None, level: 0 });
        self.phase.push(false);
        self.activity.push(0.0);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.order.grow(self.assigns.len());
        self.order.insert(v.0, &self.activity);
        v
    }

    fn ensure_var(&mut self, v: SVar) {
        while self.num_vars() <= v.0 as usize {
            self.new_var();
        }
    }

    fn value(&self, l: SLit) -> LBool {
        match self.assigns[l.var().0 as usize] {
            LBool::Undef => LBool::Undef,
            LBool::True if l.is_neg() => LBool::False,
            LBool::True => LBool::True,
            LBool::False if l.is_neg() => LBool::True,
            LBool::False => LBool::False,
        }
    }

    fn level(&self, v: SVar) -> u32 {
        self.vardata[v.0 as usize].level
    }

    fn reason(&self, v: SVar) -> Option<u32> {
        self.vardata[v.0 as usize].reason
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Value of `lit` in the model of the last satisfiable call.
    pub fn model_value(&self, lit: SLit) -> bool {
        let v = lit.var().0 as usize;
        self.model.get(v).copied().unwrap_or(false) ^ lit.is_neg()
    }

    /// Value fixed at decision level 0, if any.
    pub fn fixed_value(&self, lit: SLit) -> Option<bool> {
        if (lit.var().0 as usize) >= self.num_vars() || self.level(lit.var()) != 0 {
            return None;
        }
        match self.value(lit) {
            LBool::True => Some(true),
            LBool::False => Some(false),
            LBool::Undef => None,
        }
    }

    // ----- clause database ---------------------------------------------

    /// Adds a permanent clause. Returns false if the database became
    /// unsatisfiable (an empty clause puts the solver in that state).
    pub fn add_clause(&mut self, lits: &[SLit]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        for &l in lits {
            self.ensure_var(l.var());
        }
        let mut c: Vec<SLit> = lits.to_vec();
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return true;
        }
        if c.iter().any(|&l| self.value(l) == LBool::True) {
            return true;
        }
        c.retain(|&l| self.value(l) != LBool::False);
        match c.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(c[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                self.alloc_clause(c, false);
                true
            }
        }
    }

    /// Adds a clause that stays active until [`Solver::retract`] is called.
    pub fn add_retractable(&mut self, lits: &[SLit]) -> Activation {
        let act = self.new_var();
        let mut c = lits.to_vec();
        c.push(act.neg());
        self.add_clause(&c);
        self.active_acts.push(act);
        Activation(act)
    }

    /// Permanently disables a retractable clause.
    pub fn retract(&mut self, act: Activation) {
        self.active_acts.retain(|&a| a != act.0);
        self.add_clause(&[act.0.neg()]);
    }

    fn alloc_clause(&mut self, lits: Vec<SLit>, learnt: bool) -> u32 {
        let (w0, w1) = (lits[0], lits[1]);
        let clause = Clause { lits, learnt, deleted: false, activity: 0.0 };
        let cref = match self.free_crefs.pop() {
            Some(r) => {
                self.clauses[r as usize] = clause;
                r
            }
            None => {
                self.clauses.push(clause);
                (self.clauses.len() - 1) as u32
            }
        };
        self.watches[(!w0).idx()].push(Watcher { cref, blocker: w1 });
        self.watches[(!w1).idx()].push(Watcher { cref, blocker: w0 });
        if learnt {
            self.num_learnts += 1;
        }
        cref
    }

    fn delete_clauses(&mut self, crefs: &[u32]) {
        if crefs.is_empty() {
            return;
        }
        for &r in crefs {
            let c = &mut self.clauses[r as usize];
            c.deleted = true;
            if c.learnt {
                self.num_learnts -= 1;
            }
            c.lits = Vec::new();
        }
        let clauses = &self.clauses;
        for ws in &mut self.watches {
            ws.retain(|w| !clauses[w.cref as usize].deleted);
        }
        self.free_crefs.extend_from_slice(crefs);
    }

    // ----- assignment --------------------------------------------------

    fn enqueue(&mut self, l: SLit, reason: Option<u32>) {
        let v = l.var().0 as usize;
        debug_assert_eq!(self.assigns[v], LBool::Undef);
        self.assigns[v] = if l.is_neg() { LBool::False } else { LBool::True };
        self.vardata[v] = VarData { reason, level: self.decision_level() };
        self.trail.push(l);
    }

    fn new_decision_level(&mut self) {
        self.trail_lim.push(self.trail.len());
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().0 as usize;
            self.phase[v] = !l.is_neg();
            self.assigns[v] = LBool::Undef;
            self.vardata[v].reason = None;
            self.order.insert(v as u32, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = self.qhead.min(lim);
    }

    /// Unit propagation; returns a conflicting clause if any.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.idx()]);
            let mut i = 0;
            let mut j = 0;
            'watchers: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == LBool::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.value(first) == LBool::True {
                    ws[j] = Watcher { cref: w.cref, blocker: first };
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                for k in 2..len {
                    let lk = self.clauses[cref].lits[k];
                    if self.value(lk) != LBool::False {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[(!lk).idx()].push(Watcher { cref: w.cref, blocker: first });
                        continue 'watchers;
                    }
                }
                ws[j] = Watcher { cref: w.cref, blocker: first };
                j += 1;
                if self.value(first) == LBool::False {
                    conflict = Some(w.cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            // watchers may have been appended to this list for other clauses
            let appended = std::mem::replace(&mut self.watches[p.idx()], ws);
            self.watches[p.idx()].extend(appended);
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    // ----- heuristics ----------------------------------------------------

    fn bump_var(&mut self, v: SVar) {
        let i = v.0 as usize;
        self.activity[i] += self.var_inc;
        if self.activity[i] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.increased(v.0, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.clause_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.clause_inc *= 1e-20;
        }
    }

    fn pick_branch(&mut self) -> Option<SLit> {
        while let Some(v) = self.order.pop(&self.activity) {
            if self.assigns[v as usize] == LBool::Undef {
                return Some(SVar(v).lit(!self.phase[v as usize]));
            }
        }
        None
    }

    // ----- conflict analysis --------------------------------------------

    fn analyze(&mut self, mut confl: u32) -> (Vec<SLit>, u32) {
        let mut learnt = vec![SLit(0)];
        let mut path = 0;
        let mut p: Option<SLit> = None;
        let mut index = self.trail.len();
        let mut to_clear = Vec::new();
        loop {
            if self.clauses[confl as usize].learnt {
                self.bump_clause(confl);
            }
            let skip = usize::from(p.is_some());
            let lits = self.clauses[confl as usize].lits.clone();
            for &q in &lits[skip..] {
                let v = q.var();
                if !self.seen[v.0 as usize] && self.level(v) > 0 {
                    self.bump_var(v);
                    self.seen[v.0 as usize] = true;
                    to_clear.push(v);
                    if self.level(v) >= self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().0 as usize] {
                    break;
                }
            }
            let pl = self.trail[index];
            p = Some(pl);
            self.seen[pl.var().0 as usize] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason(pl.var()).expect("implied literal has a reason");
        }
        learnt[0] = !p.unwrap();

        // local minimization: drop literals implied by other learnt literals
        let mut keep = vec![learnt[0]];
        for &l in &learnt[1..] {
            let redundant = match self.reason(l.var()) {
                None => false,
                Some(r) => self.clauses[r as usize].lits[1..]
                    .iter()
                    .all(|q| self.seen[q.var().0 as usize] || self.level(q.var()) == 0),
            };
            if !redundant {
                keep.push(l);
            }
        }
        for v in to_clear {
            self.seen[v.0 as usize] = false;
        }
        let mut learnt = keep;

        let bt = if learnt.len() == 1 {
            0
        } else {
            let (mut max_i, mut max_l) = (1, self.level(learnt[1].var()));
            for (i, l) in learnt.iter().enumerate().skip(2) {
                let lv = self.level(l.var());
                if lv > max_l {
                    max_i = i;
                    max_l = lv;
                }
            }
            learnt.swap(1, max_i);
            max_l
        };
        (learnt, bt)
    }

    /// Assumption subset responsible for `failed` (an assumption currently
    /// assigned false).
    fn analyze_final(&mut self, failed: SLit) -> Vec<SLit> {
        let mut out = vec![failed];
        if self.decision_level() == 0 {
            return out;
        }
        self.seen[failed.var().0 as usize] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let l = self.trail[i];
            let x = l.var().0 as usize;
            if !self.seen[x] {
                continue;
            }
            match self.vardata[x].reason {
                None => {
                    if self.vardata[x].level > 0 {
                        out.push(l);
                    }
                }
                Some(r) => {
                    for k in 1..self.clauses[r as usize].lits.len() {
                        let q = self.clauses[r as usize].lits[k];
                        if self.level(q.var()) > 0 {
                            self.seen[q.var().0 as usize] = true;
                        }
                    }
                }
            }
            self.seen[x] = false;
        }
        self.seen[failed.var().0 as usize] = false;
        out
    }

    // ----- simplification / reduction -----------------------------------

    fn satisfied(&self, c: &Clause) -> bool {
        c.lits.iter().any(|&l| self.value(l) == LBool::True)
    }

    /// Removes clauses satisfied at level 0.
    fn simplify(&mut self) {
        debug_assert_eq!(self.decision_level(), 0);
        if self.trail.len() == self.simp_trail {
            return;
        }
        let dead: Vec<u32> = self
            .clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.deleted && self.satisfied(c))
            .map(|(i, _)| i as u32)
            .collect();
        // level-0 reasons are never consulted by analysis
        for &l in &self.trail {
            self.vardata[l.var().0 as usize].reason = None;
        }
        self.delete_clauses(&dead);
        self.simp_trail = self.trail.len();
    }

    fn locked(&self, cref: u32) -> bool {
        let c = &self.clauses[cref as usize];
        let l0 = c.lits[0];
        self.value(l0) == LBool::True && self.reason(l0.var()) == Some(cref)
    }

    fn reduce_db(&mut self) {
        self.stats.reductions += 1;
        let mut learnts: Vec<u32> =
            self.clauses.iter().enumerate().filter(|(_, c)| c.learnt && !c.deleted).map(|(i, _)| i as u32).collect();
        learnts.sort_by(|&a, &b| {
            self.clauses[a as usize]
                .activity
                .partial_cmp(&self.clauses[b as usize].activity)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let half = learnts.len() / 2;
        let dead: Vec<u32> = learnts[..half]
            .iter()
            .copied()
            .filter(|&r| self.clauses[r as usize].lits.len() > 2 && !self.locked(r))
            .collect();
        self.delete_clauses(&dead);
    }

    // ----- search --------------------------------------------------------

    fn luby(y: f64, mut x: u64) -> f64 {
        let (mut size, mut seq) = (1u64, 0u32);
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != x {
            size = (size - 1) >> 1;
            seq -= 1;
            x %= size;
        }
        y.powi(seq as i32)
    }

    fn search(&mut self, max_conflicts: u64, assumptions: &[SLit], used: &mut u64) -> SearchOutcome {
        let mut conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                *used += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SearchOutcome::Unsat(Vec::new());
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let l0 = learnt[0];
                    let cref = self.alloc_clause(learnt, true);
                    self.bump_clause(cref);
                    self.enqueue(l0, Some(cref));
                }
                self.var_inc /= VAR_DECAY;
                self.clause_inc /= CLAUSE_DECAY;
                if self.conflict_budget.is_some_and(|b| *used >= b) {
                    return SearchOutcome::Budget;
                }
                if (*used).is_multiple_of(DEADLINE_POLL) && self.deadline.is_some_and(|d| Instant::now() >= d) {
                    return SearchOutcome::Budget;
                }
            } else {
                if conflicts >= max_conflicts {
                    self.cancel_until(0);
                    return SearchOutcome::Restart;
                }
                if self.num_learnts as f64 >= self.max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                }
                let mut next = None;
                while (self.decision_level() as usize) < assumptions.len() {
                    let a = assumptions[self.decision_level() as usize];
                    match self.value(a) {
                        LBool::True => self.new_decision_level(),
                        LBool::False => return SearchOutcome::Unsat(self.analyze_final(a)),
                        LBool::Undef => {
                            next = Some(a);
                            break;
                        }
                    }
                }
                let next = match next {
                    Some(a) => a,
                    None => match self.pick_branch() {
                        Some(l) => {
                            self.stats.decisions += 1;
                            l
                        }
                        None => return SearchOutcome::Sat,
                    },
                };
                self.new_decision_level();
                self.enqueue(next, None);
            }
        }
    }

    /// Solves under `assumptions`. Active retractable clauses are enforced
    /// implicitly; their activation literals never appear in the failed set.
    pub fn solve(&mut self, assumptions: &[SLit]) -> SolveResult {
        self.stats.solves += 1;
        self.model.clear();
        if !self.ok {
            return SolveResult::Unsat(Vec::new());
        }
        for &a in assumptions {
            self.ensure_var(a.var());
        }
        self.cancel_until(0);
        if self.propagate().is_some() {
            self.ok = false;
            return SolveResult::Unsat(Vec::new());
        }
        self.simplify();

        let mut all: Vec<SLit> = self.active_acts.iter().map(|a| a.pos()).collect();
        let n_acts = all.len();
        all.extend_from_slice(assumptions);
        self.max_learnts = self.max_learnts.max(self.num_clauses() as f64 / 3.0);

        let mut used = 0u64;
        let mut restarts = 0u64;
        let result = loop {
            let limit = (Self::luby(2.0, restarts) * RESTART_UNIT) as u64;
            match self.search(limit, &all, &mut used) {
                SearchOutcome::Sat => {
                    self.model = self.assigns.iter().map(|&a| a == LBool::True).collect();
                    break SolveResult::Sat;
                }
                SearchOutcome::Unsat(failed) => {
                    let acts: std::collections::HashSet<SLit> = all[..n_acts].iter().copied().collect();
                    let mut failed: Vec<SLit> = failed.into_iter().filter(|l| !acts.contains(l)).collect();
                    failed.sort_unstable();
                    failed.dedup();
                    break SolveResult::Unsat(failed);
                }
                SearchOutcome::Budget => break SolveResult::Unknown,
                SearchOutcome::Restart => {
                    restarts += 1;
                    self.stats.restarts += 1;
                    self.max_learnts *= 1.05;
                }
            }
        };
        self.cancel_until(0);
        result
    }

    /// Writes the permanent clause database (plus level-0 units and the
    /// given assumptions as unit clauses) in DIMACS CNF.
    pub fn write_dimacs(&self, w: &mut impl Write, assumptions: &[SLit]) -> io::Result<()> {
        let clauses: Vec<&Clause> = self.clauses.iter().filter(|c| !c.deleted && !c.learnt).collect();
        let units: Vec<SLit> = self.trail[..self.trail_lim.first().copied().unwrap_or(self.trail.len())].to_vec();
        let acts: Vec<SLit> = self.active_acts.iter().map(|a| a.pos()).collect();
        let total = clauses.len() + units.len() + acts.len() + assumptions.len();
        writeln!(w, "p cnf {} {}", self.num_vars(), total)?;
        for c in clauses {
            for l in &c.lits {
                write!(w, "{} ", l.to_dimacs())?;
            }
            writeln!(w, "0")?;
        }
        for l in units.iter().chain(&acts).chain(assumptions) {
            writeln!(w, "{} 0", l.to_dimacs())?;
        }
        Ok(())
    }
}
