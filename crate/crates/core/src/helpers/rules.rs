// SPDX-License-Identifier: Apache-2.0

//! Manifest entries to helper predicates.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::expr::{CmpOp, CompileError, Operand, Pred, Signals};
use super::manifest::{order_cycle, Flag, Manifest, PipelineEntry};
use super::{Family, Helper};
use crate::netlist::Netlist;

/// A manifest entry that was skipped or looks suspicious.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub entry: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entry, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generated {
    pub helpers: Vec<Helper>,
    pub diagnostics: Vec<Diagnostic>,
}

struct Gen<'a> {
    signals: Signals,
    out: Generated,
    manifest: &'a Manifest,
}

fn any(bits: &[Pred]) -> Pred {
    Pred::Or(bits.to_vec())
}

impl<'a> Gen<'a> {
    fn skip(&mut self, entry: &str, e: impl fmt::Display) {
        self.out.diagnostics.push(Diagnostic { entry: entry.to_owned(), message: e.to_string() });
    }

    fn emit(&mut self, family: Family, id: String, predicate: Pred, provenance: &[&str]) {
        if let Err(e) = self.signals.check(&predicate) {
            self.skip(&id, e);
            return;
        }
        let provenance = provenance.iter().map(|s| s.to_string()).collect();
        self.out.helpers.push(Helper { id, family, predicate, provenance });
    }

    fn flag(&self, f: &Flag) -> Result<Pred, CompileError> {
        let b = self.signals.bit_ref(&f.signal)?;
        Ok(if f.active_low { Pred::not(b) } else { b })
    }

    fn bit_refs(&self, names: &[String]) -> Result<Vec<Pred>, CompileError> {
        names.iter().map(|n| self.signals.bit_ref(n)).collect()
    }

    fn width(&self, group: &str) -> Result<usize, CompileError> {
        self.signals.get(group).map(|b| b.len()).ok_or_else(|| CompileError::UnknownSignal(group.to_owned()))
    }

    fn fsms(&mut self) {
        let manifest = self.manifest;
        for f in &manifest.fsms {
            let entry = format!("fsms/{}", f.group);
            match self.width(&f.group) {
                Ok(w) => {
                    let bits = (0..w).map(|k| Pred::bit(&f.group, Some(k))).collect();
                    self.emit(Family::FsmOneHot, format!("FsmOneHot:{}", f.group), Pred::ExactlyOne(bits), &[&entry]);
                }
                Err(e) => self.skip(&entry, e),
            }
        }
    }

    fn fifos(&mut self) {
        let manifest = self.manifest;
        for f in &manifest.fifos {
            let entry = format!("fifos/{}", f.name);
            let (empty, full, w) = match (self.flag(&f.empty), self.flag(&f.full), self.width(&f.pointer)) {
                (Ok(e), Ok(u), Ok(w)) => (e, u, w),
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                    self.skip(&entry, e);
                    continue;
                }
            };
            let mask = if w >= 64 { u64::MAX } else { (1u64 << w) - 1 };
            let reset = f.pointer_reset & mask;
            // pointer value when the FIFO holds `depth` elements
            let full_at = f.pointer_reset.wrapping_add(f.depth) & mask;
            let ptr = || Operand::group(&f.pointer);
            let name = &f.name;
            self.emit(
                Family::FifoPtrEmpty,
                format!("FifoPtrEmpty:{name}"),
                Pred::implies(Pred::cmp(CmpOp::Ne, ptr(), Operand::Const(reset)), Pred::not(empty.clone())),
                &[&entry],
            );
            self.emit(
                Family::FifoPtrFull,
                format!("FifoPtrFull:{name}"),
                Pred::implies(Pred::cmp(CmpOp::Ne, ptr(), Operand::Const(full_at)), Pred::not(full.clone())),
                &[&entry],
            );
            let bound = if reset <= full_at {
                Pred::cmp(CmpOp::Le, ptr(), Operand::Const(full_at))
            } else {
                // pointer starts above the full value and wraps on the first push
                Pred::Or(vec![
                    Pred::cmp(CmpOp::Eq, ptr(), Operand::Const(reset)),
                    Pred::cmp(CmpOp::Le, ptr(), Operand::Const(full_at)),
                ])
            };
            self.emit(Family::FifoPtrBound, format!("FifoPtrBound:{name}"), bound, &[&entry]);
            self.emit(
                Family::FifoMutex,
                format!("FifoMutex:{name}"),
                Pred::not(Pred::And(vec![empty, full])),
                &[&entry],
            );
        }
    }

    fn pipelines(&mut self) {
        let manifest = self.manifest;
        for p in &manifest.pipelines {
            let entry = format!("pipelines/{}", p.name);
            let en = match self.bit_refs(&p.enables) {
                Ok(v) => v,
                Err(e) => {
                    self.skip(&entry, e);
                    continue;
                }
            };
            if en.len() >= 3 {
                self.emit(Family::PipelineWindow, format!("PipelineWindow:{}", p.name), window(&en), &[&entry]);
            }
            if en.len() >= 2 {
                self.emit(Family::PipelineFlip, format!("PipelineFlip:{}:enable", p.name), flip(&en), &[&entry]);
            }
            match self.bit_refs(&p.exits) {
                Ok(ex) if ex.len() >= 2 => {
                    self.emit(Family::PipelineFlip, format!("PipelineFlip:{}:exit", p.name), flip(&ex), &[&entry])
                }
                Ok(_) => {}
                Err(e) => self.skip(&entry, e),
            }
        }
    }

    fn loops(&mut self) {
        let manifest = self.manifest;
        for l in &manifest.loops {
            let entry = format!("loops/{}", l.name);
            let var = || Operand::group(&l.var);
            let hi = l.start.saturating_add(l.trip_count);
            let upper = Pred::cmp(CmpOp::Le, var(), Operand::Const(hi));
            let pred = if l.start > 0 {
                Pred::And(vec![Pred::cmp(CmpOp::Ge, var(), Operand::Const(l.start)), upper])
            } else {
                upper
            };
            if let Some(pipe) = &l.pipeline {
                if !self.manifest.pipelines.iter().any(|p| &p.name == pipe) {
                    self.skip(&entry, format!("unknown pipeline `{pipe}`"));
                }
            }
            self.emit(Family::LoopBound, format!("LoopBound:{}", l.name), pred, &[&entry]);
        }
    }

    fn pipeline_of(&self, loop_name: &str) -> Result<&'a PipelineEntry, String> {
        let manifest: &'a Manifest = self.manifest;
        let l = manifest.loops.iter().find(|l| l.name == loop_name).ok_or(format!("unknown loop `{loop_name}`"))?;
        let p = l.pipeline.as_ref().ok_or(format!("loop `{loop_name}` has no pipeline"))?;
        manifest.pipelines.iter().find(|q| &q.name == p).ok_or(format!("unknown pipeline `{p}`"))
    }

    fn loop_orders(&mut self) {
        if let Some(c) = order_cycle(&self.manifest.loop_orders) {
            self.skip("loop_orders", format!("cyclic order through {}", c.join(", ")));
        }
        let manifest = self.manifest;
        for o in &manifest.loop_orders {
            let entry = format!("loop_orders/{}>{}", o.earlier, o.later);
            let (p1, p2) = match (self.pipeline_of(&o.earlier), self.pipeline_of(&o.later)) {
                (Ok(a), Ok(b)) => (a.clone(), b.clone()),
                (Err(e), _) | (_, Err(e)) => {
                    self.skip(&entry, e);
                    continue;
                }
            };
            let sets = [("enable", &p1.enables, &p2.enables), ("exit", &p1.exits, &p2.exits)];
            for (kind, first, second) in sets {
                if first.is_empty() || second.is_empty() {
                    continue;
                }
                match (self.bit_refs(first), self.bit_refs(second)) {
                    (Ok(a), Ok(b)) => {
                        let pred = Pred::implies(any(&b), Pred::not(any(&a)));
                        let id = format!("LoopOrder:{}>{}:{kind}", o.earlier, o.later);
                        self.emit(Family::LoopOrder, id, pred, &[&entry]);
                    }
                    (Err(e), _) | (_, Err(e)) => self.skip(&entry, e),
                }
            }
        }
    }

    fn function_orders(&mut self) {
        if let Some(c) = order_cycle(&self.manifest.function_orders) {
            self.skip("function_orders", format!("cyclic order through {}", c.join(", ")));
        }
        let manifest = self.manifest;
        let by_name: HashMap<&str, _> = manifest.functions.iter().map(|f| (f.name.as_str(), f)).collect();
        for o in &manifest.function_orders {
            let entry = format!("function_orders/{}>{}", o.earlier, o.later);
            let (Some(a), Some(b)) = (by_name.get(o.earlier.as_str()), by_name.get(o.later.as_str())) else {
                self.skip(&entry, "unknown function");
                continue;
            };
            let refs = (self.signals.bit_ref(&b.start), self.signals.bit_ref(&b.done), self.signals.bit_ref(&a.idle));
            match refs {
                (Ok(start), Ok(done), Ok(idle)) => {
                    let busy = Pred::sticky(start, done);
                    let id = format!("FunctionOrder:{}>{}", o.earlier, o.later);
                    let pa = format!("functions/{}", a.name);
                    let pb = format!("functions/{}", b.name);
                    self.emit(Family::FunctionOrder, id, Pred::implies(busy, idle), &[&entry, &pa, &pb]);
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => self.skip(&entry, e),
            }
        }
    }
}

/// The asserted bits form one interval: no asserted bit below a deasserted
/// one that sits below another asserted bit.
fn window(en: &[Pred]) -> Pred {
    let mut terms = Vec::new();
    for i in 0..en.len() {
        for j in i + 1..en.len() {
            for k in j + 1..en.len() {
                terms.push(Pred::not(Pred::And(vec![en[i].clone(), Pred::not(en[j].clone()), en[k].clone()])));
            }
        }
    }
    Pred::And(terms)
}

fn past(p: &Pred) -> Pred {
    match p {
        Pred::Bit { signal, bit, .. } => Pred::past(signal, *bit),
        _ => unreachable!("bit references only"),
    }
}

/// At most one bit changes per cycle, and a changed bit agrees with its
/// lower neighbour (filling and draining upward) or with its upper
/// neighbour (downward). Per-cycle only: the direction may differ between
/// cycles.
fn flip(bits: &[Pred]) -> Pred {
    let n = bits.len();
    let changed: Vec<Pred> = bits.iter().map(|b| Pred::xor(b.clone(), past(b))).collect();
    let rise = |k: usize| Pred::And(vec![bits[k].clone(), Pred::not(past(&bits[k]))]);
    let fall = |k: usize| Pred::And(vec![Pred::not(bits[k].clone()), past(&bits[k])]);
    let follows = |k: usize, nb: usize| {
        vec![Pred::implies(rise(k), bits[nb].clone()), Pred::implies(fall(k), Pred::not(bits[nb].clone()))]
    };
    let up: Vec<Pred> = (1..n).flat_map(|k| follows(k, k - 1)).collect();
    let down: Vec<Pred> = (0..n - 1).flat_map(|k| follows(k, k + 1)).collect();
    Pred::And(vec![Pred::AtMostOne(changed), Pred::Or(vec![Pred::And(up), Pred::And(down)])])
}

/// One helper per applicable (rule, entry) pair, in manifest order: FSMs,
/// FIFOs, pipelines, loops, loop orders, function orders.
pub fn generate_helpers(netlist: &Netlist, manifest: &Manifest) -> Generated {
    let mut g = Gen { signals: Signals::new(netlist), out: Generated::default(), manifest };
    g.fsms();
    g.fifos();
    g.pipelines();
    g.loops();
    g.loop_orders();
    g.function_orders();
    g.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::helpers::manifest::{FifoEntry, LoopEntry, Order};

    fn counter(width: usize) -> Netlist {
        let mut n = Netlist::new();
        for k in 0..width {
            n.add_latch(Some(&format!("i_reg[{k}]")));
        }
        n
    }

    #[test]
    fn loop_bound_text() {
        let n = counter(10);
        let m = Manifest {
            loops: vec![LoopEntry {
                name: "vadd".into(),
                var: "i_reg".into(),
                trip_count: 1000,
                start: 0,
                pipeline: None,
            }],
            ..Default::default()
        };
        let g = generate_helpers(&n, &m);
        assert!(g.diagnostics.is_empty());
        assert_eq!(g.helpers.len(), 1);
        assert_eq!(g.helpers[0].id, "LoopBound:vadd");
        assert_eq!(g.helpers[0].display(), "i_reg <= 1000");
    }

    #[test]
    fn nonzero_start_adds_lower_bound() {
        let n = counter(4);
        let m = Manifest {
            loops: vec![LoopEntry { name: "l".into(), var: "i_reg".into(), trip_count: 5, start: 2, pipeline: None }],
            ..Default::default()
        };
        assert_eq!(generate_helpers(&n, &m).helpers[0].display(), "(i_reg >= 2) & (i_reg <= 7)");
    }

    #[test]
    fn fifo_gives_four_helpers() {
        let mut n = counter(0);
        for k in 0..4 {
            n.add_latch(Some(&format!("q_fifo_mOutPtr[{k}]")));
        }
        n.add_latch(Some("!q_fifo_internal_full_n"));
        n.add_latch(Some("q_fifo_internal_empty_n"));
        let flag = |s: &str| Flag { signal: s.into(), active_low: true };
        let m = Manifest {
            fifos: vec![FifoEntry {
                name: "q".into(),
                pointer: "q_fifo_mOutPtr".into(),
                depth: 8,
                pointer_reset: 0,
                full: flag("q_fifo_internal_full_n"),
                empty: flag("q_fifo_internal_empty_n"),
            }],
            ..Default::default()
        };
        let g = generate_helpers(&n, &m);
        let shown: Vec<(String, String)> = g.helpers.iter().map(|h| (h.id.clone(), h.display())).collect();
        assert_eq!(
            shown,
            vec![
                ("FifoPtrEmpty:q".to_string(), "(q_fifo_mOutPtr != 0) -> q_fifo_internal_empty_n".to_string()),
                ("FifoPtrFull:q".to_string(), "(q_fifo_mOutPtr != 8) -> q_fifo_internal_full_n".to_string()),
                ("FifoPtrBound:q".to_string(), "q_fifo_mOutPtr <= 8".to_string()),
                ("FifoMutex:q".to_string(), "!(!q_fifo_internal_empty_n & !q_fifo_internal_full_n)".to_string()),
            ]
        );
    }

    #[test]
    fn unresolved_entries_are_skipped() {
        let n = counter(3);
        let m = Manifest {
            loops: vec![LoopEntry { name: "x".into(), var: "nope".into(), trip_count: 3, start: 0, pipeline: None }],
            loop_orders: vec![Order { earlier: "x".into(), later: "y".into() }],
            ..Default::default()
        };
        let g = generate_helpers(&n, &m);
        assert!(g.helpers.is_empty());
        assert_eq!(g.diagnostics.len(), 2);
    }

    #[test]
    fn deterministic() {
        let n = counter(8);
        let m = Manifest {
            fsms: vec![crate::helpers::FsmEntry { group: "i_reg".into(), encoding: Default::default() }],
            loops: vec![LoopEntry { name: "a".into(), var: "i_reg".into(), trip_count: 9, start: 0, pipeline: None }],
            ..Default::default()
        };
        assert_eq!(generate_helpers(&n, &m), generate_helpers(&n, &m));
    }
}
