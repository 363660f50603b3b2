// SPDX-License-Identifier: Apache-2.0

//! Helper ranking by CTI variable frequency over each helper's fan-in cone.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::helpers::{compile_helper, CompileError, Helper};
use crate::netlist::{tfi_registers, Netlist, Var};
use crate::pdr::{Cti, ProveResult};

/// Occurrences of each latch variable across a CTI log, polarities pooled.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    counts: BTreeMap<Var, u64>,
}

impl FrequencyTable {
    pub fn from_ctis(ctis: &[Cti]) -> Self {
        let mut counts = BTreeMap::new();
        for c in ctis {
            for l in c.cube.lits() {
                *counts.entry(l.var()).or_insert(0) += 1;
            }
        }
        FrequencyTable { counts }
    }

    pub fn get(&self, v: Var) -> u64 {
        self.counts.get(&v).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u64)> + '_ {
        self.counts.iter().map(|(&v, &c)| (v, c))
    }

    /// Σ_{u ∈ regs} f(u).
    pub fn score(&self, regs: &BTreeSet<Var>) -> u64 {
        regs.iter().map(|&v| self.get(v)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Fresh,
    Dispatched,
    Proved,
    Failed,
}

#[derive(Debug, Clone)]
pub struct RankedHelper {
    pub helper: Helper,
    /// Original latches and inputs in the fan-in of the compiled monitor.
    pub registers: BTreeSet<Var>,
    pub score: u64,
    pub status: Status,
}

/// One row of a ranked-list dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub id: String,
    pub score: u64,
    pub registers: usize,
    pub status: Status,
}

/// The register set of `helper`: latches and inputs of `netlist` that reach
/// its compiled monitor. Monitor shadow latches are traversed but not
/// reported.
pub fn register_set(netlist: &Netlist, helper: &Helper) -> Result<BTreeSet<Var>, CompileError> {
    let c = compile_helper(netlist, helper)?;
    let root = c.netlist.outputs()[c.monitor].var();
    let original = |v: Var| netlist.is_latch(v) || netlist.input_index(v).is_some();
    Ok(tfi_registers(&c.netlist, &[root]).into_iter().filter(|&v| original(v)).collect())
}

pub fn build_register_sets(
    netlist: &Netlist,
    helpers: &[Helper],
) -> Vec<(String, Result<BTreeSet<Var>, CompileError>)> {
    helpers.iter().map(|h| (h.id.clone(), register_set(netlist, h))).collect()
}

/// Total order: higher score first, then family priority, then id.
fn before(a: &RankedHelper, b: &RankedHelper) -> std::cmp::Ordering {
    b.score
        .cmp(&a.score)
        .then(a.helper.family.priority().cmp(&b.helper.family.priority()))
        .then_with(|| a.helper.id.cmp(&b.helper.id))
}

#[derive(Debug, Clone)]
pub struct Ranker {
    entries: Vec<RankedHelper>,
    table: FrequencyTable,
}

impl Ranker {
    /// Computes every register set once. Helpers that do not compile start
    /// out failed.
    pub fn new(netlist: &Netlist, helpers: Vec<Helper>) -> Self {
        let entries = helpers
            .into_iter()
            .map(|helper| {
                let (registers, status) = match register_set(netlist, &helper) {
                    Ok(r) => (r, Status::Fresh),
                    Err(e) => {
                        log::warn!("helper {} does not compile: {e}", helper.id);
                        (BTreeSet::new(), Status::Failed)
                    }
                };
                RankedHelper { helper, registers, score: 0, status }
            })
            .collect();
        Ranker { entries, table: FrequencyTable::default() }
    }

    pub fn entries(&self) -> &[RankedHelper] {
        &self.entries
    }

    pub fn table(&self) -> &FrequencyTable {
        &self.table
    }

    pub fn fresh(&self) -> usize {
        self.entries.iter().filter(|e| e.status == Status::Fresh).count()
    }

    /// Rescores all fresh helpers from the CTI log of `result`, then serves
    /// the best `n` of them.
    pub fn get_best_helpers(&mut self, result: &ProveResult, n: usize) -> Vec<Helper> {
        self.get_best_from(&result.ctis, n)
    }

    pub fn get_best_from(&mut self, ctis: &[Cti], n: usize) -> Vec<Helper> {
        self.table = FrequencyTable::from_ctis(ctis);
        for e in &mut self.entries {
            if e.status == Status::Fresh {
                e.score = self.table.score(&e.registers);
            }
        }
        let mut fresh: Vec<usize> =
            (0..self.entries.len()).filter(|&i| self.entries[i].status == Status::Fresh).collect();
        fresh.sort_by(|&a, &b| before(&self.entries[a], &self.entries[b]));
        fresh.truncate(n);
        fresh
            .into_iter()
            .map(|i| {
                self.entries[i].status = Status::Dispatched;
                self.entries[i].helper.clone()
            })
            .collect()
    }

    /// Records the outcome of a dispatched helper. Returns false for unknown
    /// ids or helpers that were never dispatched.
    pub fn set_status(&mut self, id: &str, status: Status) -> bool {
        match self.entries.iter_mut().find(|e| e.helper.id == id) {
            Some(e) if e.status == Status::Dispatched && matches!(status, Status::Proved | Status::Failed) => {
                e.status = status;
                true
            }
            _ => false,
        }
    }

    /// All helpers in current rank order.
    pub fn dump(&self) -> Vec<RankEntry> {
        let mut v: Vec<&RankedHelper> = self.entries.iter().collect();
        v.sort_by(|a, b| before(a, b));
        v.into_iter()
            .map(|e| RankEntry {
                id: e.helper.id.clone(),
                score: e.score,
                registers: e.registers.len(),
                status: e.status,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clause::Cube;
    use crate::helpers::{CmpOp, Family, Operand, Pred};
    use crate::netlist::Lit;

    fn helper(id: &str, family: Family, predicate: Pred) -> Helper {
        Helper { id: id.into(), family, predicate, provenance: Vec::new() }
    }

    fn cti(lits: &[Lit]) -> Cti {
        Cti { level: 1, cube: Cube::new(lits.iter().copied()), timestamp: 0 }
    }

    #[test]
    fn frequencies_pool_polarities() {
        assert_eq!(FrequencyTable::from_ctis(&[]).total(), 0);
        let (v, w) = (Var(1), Var(2));
        let t = FrequencyTable::from_ctis(&[cti(&[v.lit(), !w.lit()]), cti(&[v.lit()])]);
        assert_eq!((t.get(v), t.get(w), t.total()), (2, 1, 3));
    }

    #[test]
    fn counter_bound_covers_counter_bits() {
        let mut n = Netlist::new();
        let bits: Vec<Lit> = (0..10).map(|k| n.add_latch(Some(&format!("i[{k}]")))).collect();
        let mut carry = Lit::TRUE;
        for &b in &bits {
            let next = n.xor(b, carry);
            carry = n.and(b, carry);
            n.set_next(b.var(), next);
        }
        let other = n.add_latch(Some("o"));
        n.set_next(other.var(), !other);
        let h =
            helper("LoopBound:x", Family::LoopBound, Pred::cmp(CmpOp::Le, Operand::group("i"), Operand::Const(1000)));
        let regs = register_set(&n, &h).unwrap();
        assert_eq!(regs, bits.iter().map(|b| b.var()).collect());
        let t = helper("t", Family::FsmOneHot, Pred::True);
        assert!(register_set(&n, &t).unwrap().is_empty());
    }

    #[test]
    fn score_then_priority_then_id() {
        let mut n = Netlist::new();
        let v = n.add_latch(Some("v"));
        let w = n.add_latch(Some("w"));
        n.set_next(v.var(), v);
        n.set_next(w.var(), w);
        let hs = vec![
            helper("b", Family::FifoMutex, Pred::bit("w", None)),
            helper("a", Family::FifoMutex, Pred::bit("v", None)),
            helper("c", Family::LoopBound, Pred::True),
        ];
        // no CTIs: pure tie-break order
        let mut r = Ranker::new(&n, hs.clone());
        let ids: Vec<String> = r.get_best_from(&[], 3).into_iter().map(|h| h.id).collect();
        assert_eq!(ids, ["c", "a", "b"]);
        assert!(r.get_best_from(&[], 3).is_empty());

        let mut r = Ranker::new(&n, hs);
        let log: Vec<Cti> = (0..5).map(|_| cti(&[v])).chain((0..2).map(|_| cti(&[!w]))).collect();
        assert_eq!(r.get_best_from(&log, 1)[0].id, "a");
        assert_eq!(r.get_best_from(&log, 1)[0].id, "b");
        assert!(r.set_status("a", Status::Failed));
        assert!(!r.set_status("c", Status::Proved));
        assert_eq!(r.fresh(), 1);
    }
}
