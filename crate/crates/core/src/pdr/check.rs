// SPDX-License-Identifier: Apache-2.0

//! Stand-alone SAT checks over frames and clause sets. Each check builds its
//! own solver, so it does not share state with the engine it audits.

use serde::{Deserialize, Serialize};

use super::encode::Encoder;
use crate::clause::Clause;
use crate::netlist::{Lit, Netlist};
use crate::sat::{SLit, Solver};

/// Which side-load requirement a clause failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideloadCheck {
    /// A literal is not over a latch of the netlist.
    NotOverLatches,
    /// The reset state violates the clause.
    Init,
    /// Some successor of the reset state violates the clause.
    InitStep,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideloadReport {
    pub accepted: Vec<Clause>,
    pub rejected: Vec<(Clause, SideloadCheck)>,
    pub sat_queries: u64,
}

struct Checker<'a> {
    netlist: &'a Netlist,
    solver: Solver,
    enc: Encoder,
}

impl<'a> Checker<'a> {
    fn new(netlist: &'a Netlist) -> Self {
        let mut solver = Solver::new();
        let enc = Encoder::new(netlist, &mut solver);
        Checker { netlist, solver, enc }
    }

    fn cur(&mut self, l: Lit) -> SLit {
        self.enc.lit(self.netlist, &mut self.solver, l)
    }

    fn next(&mut self, l: Lit) -> SLit {
        self.enc.primed(self.netlist, &mut self.solver, l)
    }

    fn reset_assumptions(&mut self) -> Vec<SLit> {
        let latches: Vec<Lit> = self.netlist.latches().iter().map(|l| !l.var.lit()).collect();
        latches.into_iter().map(|l| self.cur(l)).collect()
    }

    /// Guards every clause with a fresh activation literal over the current
    /// state and returns the activations.
    fn load(&mut self, clauses: &[Clause]) -> Vec<SLit> {
        let act = self.solver.new_var();
        for c in clauses {
            let mut lits: Vec<SLit> = c.lits().iter().map(|&l| self.cur(l)).collect();
            lits.push(act.neg());
            self.solver.add_clause(&lits);
        }
        vec![act.pos()]
    }

    fn queries(&self) -> u64 {
        self.solver.stats().solves
    }
}

fn over_latches(netlist: &Netlist, c: &Clause) -> bool {
    c.lits().iter().all(|l| netlist.is_latch(l.var()))
}

/// Keeps exactly the clauses `c` with INIT → c and INIT ∧ Tr → c′.
pub fn validate_sideload(netlist: &Netlist, clauses: &[Clause]) -> SideloadReport {
    let mut report = SideloadReport::default();
    let mut ck = Checker::new(netlist);
    let reset = ck.reset_assumptions();
    for c in clauses {
        if !over_latches(netlist, c) {
            report.rejected.push((c.clone(), SideloadCheck::NotOverLatches));
            continue;
        }
        if c.is_tautology() {
            report.accepted.push(c.clone());
            continue;
        }
        if !c.holds_at_reset() {
            report.rejected.push((c.clone(), SideloadCheck::Init));
            continue;
        }
        let mut a = reset.clone();
        for &l in c.lits() {
            a.push(ck.next(!l));
        }
        if ck.solver.solve(&a).is_unsat() {
            report.accepted.push(c.clone());
        } else {
            report.rejected.push((c.clone(), SideloadCheck::InitStep));
        }
    }
    report.sat_queries = ck.queries();
    report
}

/// The first failed condition of an inductive-invariant check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantViolation {
    NotOverLatches(Clause),
    /// INIT ⊭ clause.
    Initiation(Clause),
    /// INV ∧ Tr ⊭ clause′.
    Consecution(Clause),
    /// INV ∧ bad is satisfiable.
    Safety,
}

impl std::fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InvariantViolation::NotOverLatches(c) => write!(f, "clause {c} mentions a non-latch"),
            InvariantViolation::Initiation(c) => write!(f, "reset state violates {c}"),
            InvariantViolation::Consecution(c) => write!(f, "{c} is not preserved by the transition relation"),
            InvariantViolation::Safety => write!(f, "invariant does not exclude the bad states"),
        }
    }
}

/// Checks INIT → INV, INV ∧ Tr → INV′ and INV → ¬bad with fresh SAT
/// queries. Returns the number of queries on success.
pub fn check_invariant(netlist: &Netlist, bad: Lit, inv: &[Clause]) -> Result<u64, InvariantViolation> {
    let mut ck = Checker::new(netlist);
    for c in inv {
        if !over_latches(netlist, c) {
            return Err(InvariantViolation::NotOverLatches(c.clone()));
        }
    }
    let reset = ck.reset_assumptions();
    for c in inv {
        let mut a = reset.clone();
        a.extend(c.lits().iter().map(|&l| !ck.cur(l)));
        if !ck.solver.solve(&a).is_unsat() {
            return Err(InvariantViolation::Initiation(c.clone()));
        }
    }
    let acts = ck.load(inv);
    for c in inv {
        let mut a = acts.clone();
        for &l in c.lits() {
            a.push(ck.next(!l));
        }
        if !ck.solver.solve(&a).is_unsat() {
            return Err(InvariantViolation::Consecution(c.clone()));
        }
    }
    let mut a = acts;
    a.push(ck.cur(bad));
    if !ck.solver.solve(&a).is_unsat() {
        return Err(InvariantViolation::Safety);
    }
    Ok(ck.queries())
}

/// A failed frame-sequence condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameViolation {
    /// INIT ⊭ clause stored at `level`.
    Initiation { level: usize, clause: Clause },
    /// F_level ∧ Tr ⊭ clause′ for a clause of F_{level+1}.
    Consecution { level: usize, clause: Clause },
    /// F_level ∧ bad is satisfiable below the frontier.
    Safety { level: usize },
}

/// Validates a delta-encoded frame sequence (`frames[k]` holds the clauses
/// stored at level k; level 0 is INIT and holds none):
/// INIT → F_1, F_i ∧ Tr → F_{i+1}′, and F_i → ¬bad for every i below the
/// top level. F_i → F_{i+1} holds by construction of the encoding.
pub fn validate_frames(netlist: &Netlist, bad: Lit, frames: &[Vec<Clause>]) -> Result<u64, FrameViolation> {
    let mut ck = Checker::new(netlist);
    let top = frames.len().saturating_sub(1);
    let reset = ck.reset_assumptions();
    for (level, fr) in frames.iter().enumerate().skip(1) {
        for c in fr {
            let mut a = reset.clone();
            a.extend(c.lits().iter().map(|&l| !ck.cur(l)));
            if !ck.solver.solve(&a).is_unsat() {
                return Err(FrameViolation::Initiation { level, clause: c.clone() });
            }
        }
    }
    // activation per level; F_i assumes levels i..=top
    let acts: Vec<SLit> = (0..frames.len()).map(|k| ck.load(&frames[k])[0]).collect();
    let frame = |ck: &mut Checker, i: usize| -> Vec<SLit> {
        if i == 0 {
            ck.reset_assumptions()
        } else {
            acts[i..].to_vec()
        }
    };
    for i in 0..top {
        for c in frames[i + 1..].iter().flatten() {
            let mut a = frame(&mut ck, i);
            for &l in c.lits() {
                a.push(ck.next(!l));
            }
            if !ck.solver.solve(&a).is_unsat() {
                return Err(FrameViolation::Consecution { level: i, clause: c.clone() });
            }
        }
        let mut a = frame(&mut ck, i);
        a.push(ck.cur(bad));
        if !ck.solver.solve(&a).is_unsat() {
            return Err(FrameViolation::Safety { level: i });
        }
    }
    Ok(ck.queries())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Latch v with next(v) = 1; output v.
    fn set_once() -> (Netlist, Lit) {
        let mut n = Netlist::new();
        let v = n.add_latch(Some("v"));
        n.set_next(v.var(), Lit::TRUE);
        n.add_output(v, None);
        (n, v)
    }

    #[test]
    fn sideload_rejections() {
        let (n, v) = set_once();
        let r = validate_sideload(&n, &[Clause::new([v, !v]), Clause::new([!v]), Clause::new([v])]);
        assert_eq!(r.accepted, vec![Clause::new([v, !v])]);
        assert_eq!(
            r.rejected,
            vec![(Clause::new([!v]), SideloadCheck::InitStep), (Clause::new([v]), SideloadCheck::Init)]
        );
    }

    #[test]
    fn invariant_checks() {
        let (n, v) = set_once();
        assert_eq!(
            check_invariant(&n, v, &[Clause::new([!v])]),
            Err(InvariantViolation::Consecution(Clause::new([!v])))
        );
        assert_eq!(check_invariant(&n, v, &[]), Err(InvariantViolation::Safety));
        assert!(check_invariant(&n, Lit::FALSE, &[]).is_ok());
    }

    #[test]
    fn frame_checks() {
        let (n, v) = set_once();
        // F_1 = {¬v} is wrong: the reset successor has v = 1
        let frames = vec![vec![], vec![Clause::new([!v])], vec![]];
        assert!(matches!(validate_frames(&n, Lit::FALSE, &frames), Err(FrameViolation::Consecution { level: 0, .. })));
        let frames = vec![vec![], vec![]];
        assert!(validate_frames(&n, Lit::FALSE, &frames).is_ok());
        // bad = v is reachable at depth 1, so F_1 may not sit below the top
        assert_eq!(validate_frames(&n, v, &[vec![], vec![], vec![]]), Err(FrameViolation::Safety { level: 1 }));
    }
}
