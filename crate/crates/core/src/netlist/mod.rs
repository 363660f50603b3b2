// SPDX-License-Identifier: Apache-2.0

//! And-inverter graph netlists.
//!
//! A [`Netlist`] is the transition system every other module works on:
//! latches are the state variables (all reset to 0), inputs are free in
//! every cycle, AND gates build the combinational logic, and each output is a
//! candidate "bad" signal.

pub mod aiger;
mod cone;
mod groups;
mod sim;

use std::collections::HashMap;
use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cone::tfi_registers;
pub use groups::{build_groups, group_signals, GroupDiagnostic, SignalGroup};
pub use sim::{SimError, SimStep};

/// Variable index. Variable 0 is the constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Var(pub u32);

impl Var {
    pub const CONST: Var = Var(0);

    pub fn lit(self) -> Lit {
        Lit::new(self, false)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// AIGER-style literal: `2 * var + negated`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Lit(u32);

impl Lit {
    pub const FALSE: Lit = Lit(0);
    pub const TRUE: Lit = Lit(1);

    pub fn new(var: Var, negated: bool) -> Lit {
        Lit(var.0 * 2 + negated as u32)
    }

    pub fn from_code(code: u32) -> Lit {
        Lit(code)
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn is_const(self) -> bool {
        self.0 < 2
    }

    /// Returns `self` negated when `flip` is set.
    pub fn xor(self, flip: bool) -> Lit {
        Lit(self.0 ^ flip as u32)
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Const,
    /// Position in [`Netlist::inputs`].
    Input(usize),
    /// Position in [`Netlist::latches`].
    Latch(usize),
    /// Position in [`Netlist::gates`].
    And(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Latch {
    pub var: Var,
    pub next: Lit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AndGate {
    pub var: Var,
    pub lhs: Lit,
    pub rhs: Lit,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetlistError {
    #[error("literal {0} refers to undefined variable")]
    Dangling(Lit),
    #[error("variable {0} defined twice")]
    Redefined(Var),
    #[error("combinational cycle through variable {0}")]
    Cycle(Var),
    #[error("duplicate {class} symbol `{name}`")]
    DuplicateSymbol { class: &'static str, name: String },
}

/// Signal classes of the symbol table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolClass {
    Input,
    Latch,
    Output,
}

impl SymbolClass {
    fn prefix(self) -> char {
        match self {
            SymbolClass::Input => 'i',
            SymbolClass::Latch => 'l',
            SymbolClass::Output => 'o',
        }
    }

    fn label(self) -> &'static str {
        match self {
            SymbolClass::Input => "input",
            SymbolClass::Latch => "latch",
            SymbolClass::Output => "output",
        }
    }
}

/// An and-inverter graph with latches, reset to all-zero.
///
/// Gates are kept in topological order: every gate's children are defined
/// before it in [`Netlist::gates`]. The builder methods maintain this; the
/// parsers sort and reject cycles.
#[derive(Debug, Clone, Default)]
pub struct Netlist {
    max_var: u32,
    kinds: Vec<Option<NodeKind>>,
    inputs: Vec<Var>,
    latches: Vec<Latch>,
    gates: Vec<AndGate>,
    outputs: Vec<Lit>,
    input_names: Vec<Option<String>>,
    latch_names: Vec<Option<String>>,
    output_names: Vec<Option<String>>,
    comments: Vec<String>,
    strash: HashMap<(Lit, Lit), Var>,
}

/// Structural equality: strash caches are ignored.
impl PartialEq for Netlist {
    fn eq(&self, other: &Self) -> bool {
        self.max_var == other.max_var
            && self.inputs == other.inputs
            && self.latches == other.latches
            && self.gates == other.gates
            && self.outputs == other.outputs
            && self.input_names == other.input_names
            && self.latch_names == other.latch_names
            && self.output_names == other.output_names
            && self.comments == other.comments
    }
}

impl Eq for Netlist {}

impl Netlist {
    pub fn new() -> Self {
        Netlist { kinds: vec![Some(NodeKind::Const)], ..Default::default() }
    }

    // ----- construction -------------------------------------------------

    fn fresh_var(&mut self, kind: NodeKind) -> Var {
        self.max_var += 1;
        let v = Var(self.max_var);
        self.set_kind(v, kind);
        v
    }

    fn set_kind(&mut self, v: Var, kind: NodeKind) {
        if self.kinds.len() <= v.index() {
            self.kinds.resize(v.index() + 1, None);
        }
        self.kinds[v.index()] = Some(kind);
        self.max_var = self.max_var.max(v.0);
    }

    pub fn add_input(&mut self, name: Option<&str>) -> Lit {
        let v = self.fresh_var(NodeKind::Input(self.inputs.len()));
        self.inputs.push(v);
        self.input_names.push(name.map(str::to_owned));
        v.lit()
    }

    /// Adds a latch whose next-state function is constant false until
    /// [`Netlist::set_next`] is called.
    pub fn add_latch(&mut self, name: Option<&str>) -> Lit {
        let v = self.fresh_var(NodeKind::Latch(self.latches.len()));
        self.latches.push(Latch { var: v, next: Lit::FALSE });
        self.latch_names.push(name.map(str::to_owned));
        v.lit()
    }

    /// Sets the next-state function of the latch with variable `latch`.
    pub fn set_next(&mut self, latch: Var, next: Lit) {
        match self.kind(latch) {
            Some(NodeKind::Latch(i)) => self.latches[i].next = next,
            _ => panic!("set_next on non-latch {latch}"),
        }
    }

    pub fn add_output(&mut self, lit: Lit, name: Option<&str>) -> usize {
        self.outputs.push(lit);
        self.output_names.push(name.map(str::to_owned));
        self.outputs.len() - 1
    }

    pub fn set_output_name(&mut self, index: usize, name: &str) {
        self.output_names[index] = Some(name.to_owned());
    }

    pub fn add_comment(&mut self, line: &str) {
        self.comments.push(line.to_owned());
    }

    /// AND with constant folding and structural hashing.
    pub fn and(&mut self, a: Lit, b: Lit) -> Lit {
        if a == Lit::FALSE || b == Lit::FALSE || a == !b {
            return Lit::FALSE;
        }
        if a == Lit::TRUE || a == b {
            return b;
        }
        if b == Lit::TRUE {
            return a;
        }
        let key = if a > b { (a, b) } else { (b, a) };
        if let Some(&v) = self.strash.get(&key) {
            return v.lit();
        }
        let v = self.fresh_var(NodeKind::And(self.gates.len()));
        self.gates.push(AndGate { var: v, lhs: key.0, rhs: key.1 });
        self.strash.insert(key, v);
        v.lit()
    }

    pub fn or(&mut self, a: Lit, b: Lit) -> Lit {
        !self.and(!a, !b)
    }

    pub fn xor(&mut self, a: Lit, b: Lit) -> Lit {
        let both = self.and(a, b);
        let neither = self.and(!a, !b);
        self.and(!both, !neither)
    }

    pub fn xnor(&mut self, a: Lit, b: Lit) -> Lit {
        !self.xor(a, b)
    }

    pub fn mux(&mut self, sel: Lit, then: Lit, otherwise: Lit) -> Lit {
        let t = self.and(sel, then);
        let e = self.and(!sel, otherwise);
        self.or(t, e)
    }

    pub fn and_all(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        lits.into_iter().fold(Lit::TRUE, |acc, l| self.and(acc, l))
    }

    pub fn or_all(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        lits.into_iter().fold(Lit::FALSE, |acc, l| self.or(acc, l))
    }

    /// Low-level constructor used by the parsers: raw records, then
    /// [`Netlist::finish`] sorts gates and validates.
    pub(crate) fn from_records(
        max_var: u32,
        inputs: Vec<Var>,
        latches: Vec<Latch>,
        gates: Vec<AndGate>,
        outputs: Vec<Lit>,
    ) -> Result<Self, NetlistError> {
        let mut n = Netlist::new();
        n.max_var = max_var;
        n.kinds.resize(max_var as usize + 1, None);
        for (i, &v) in inputs.iter().enumerate() {
            n.define(v, NodeKind::Input(i))?;
        }
        for (i, l) in latches.iter().enumerate() {
            n.define(l.var, NodeKind::Latch(i))?;
        }
        for (i, g) in gates.iter().enumerate() {
            n.define(g.var, NodeKind::And(i))?;
        }
        n.input_names = vec![None; inputs.len()];
        n.latch_names = vec![None; latches.len()];
        n.output_names = vec![None; outputs.len()];
        n.inputs = inputs;
        n.latches = latches;
        n.gates = gates;
        n.outputs = outputs;
        n.sort_gates()?;
        n.check_defined()?;
        for g in &n.gates {
            n.strash.insert((g.lhs.max(g.rhs), g.lhs.min(g.rhs)), g.var);
        }
        Ok(n)
    }

    fn define(&mut self, v: Var, kind: NodeKind) -> Result<(), NetlistError> {
        if v.0 == 0 || v.index() >= self.kinds.len() {
            return Err(NetlistError::Dangling(v.lit()));
        }
        if self.kinds[v.index()].is_some() {
            return Err(NetlistError::Redefined(v));
        }
        self.kinds[v.index()] = Some(kind);
        Ok(())
    }

    fn check_defined(&self) -> Result<(), NetlistError> {
        let lits = self
            .latches
            .iter()
            .map(|l| l.next)
            .chain(self.outputs.iter().copied())
            .chain(self.gates.iter().flat_map(|g| [g.lhs, g.rhs]));
        for l in lits {
            if self.kind(l.var()).is_none() {
                return Err(NetlistError::Dangling(l));
            }
        }
        Ok(())
    }

    /// Topologically sorts gates (stable for already-ordered input).
    fn sort_gates(&mut self) -> Result<(), NetlistError> {
        let n = self.gates.len();
        let pos_of = |kinds: &[Option<NodeKind>], v: Var| match kinds.get(v.index()) {
            Some(Some(NodeKind::And(i))) => Some(*i),
            _ => None,
        };
        for g in &self.gates {
            for c in [g.lhs, g.rhs] {
                if self.kinds.get(c.var().index()).copied().flatten().is_none() {
                    return Err(NetlistError::Dangling(c));
                }
            }
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some(top) = stack.last_mut() {
                let (g, child) = *top;
                if child < 2 {
                    top.1 += 1;
                    let gate = &self.gates[g];
                    let c = if child == 0 { gate.lhs } else { gate.rhs };
                    if let Some(ci) = pos_of(&self.kinds, c.var()) {
                        match state[ci] {
                            0 => {
                                state[ci] = 1;
                                stack.push((ci, 0));
                            }
                            1 => return Err(NetlistError::Cycle(c.var())),
                            _ => {}
                        }
                    }
                } else {
                    state[g] = 2;
                    order.push(g);
                    stack.pop();
                }
            }
        }
        let old = std::mem::take(&mut self.gates);
        self.gates = order.into_iter().map(|i| old[i].clone()).collect();
        for (i, g) in self.gates.iter().enumerate() {
            self.kinds[g.var.index()] = Some(NodeKind::And(i));
        }
        Ok(())
    }

    /// Checks the structural invariants: definitions, gate order, symbol
    /// uniqueness per class.
    pub fn validate(&self) -> Result<(), NetlistError> {
        self.check_defined()?;
        let mut seen = vec![false; self.kinds.len()];
        seen[0] = true;
        for &v in &self.inputs {
            seen[v.index()] = true;
        }
        for l in &self.latches {
            seen[l.var.index()] = true;
        }
        for g in &self.gates {
            for c in [g.lhs, g.rhs] {
                if !seen[c.var().index()] {
                    return Err(NetlistError::Cycle(c.var()));
                }
            }
            seen[g.var.index()] = true;
        }
        for class in [SymbolClass::Input, SymbolClass::Latch, SymbolClass::Output] {
            let mut names = std::collections::HashSet::new();
            for name in self.explicit_names(class).iter().flatten() {
                if !names.insert(name.as_str()) {
                    return Err(NetlistError::DuplicateSymbol { class: class.label(), name: name.clone() });
                }
            }
        }
        Ok(())
    }

    // ----- accessors ----------------------------------------------------

    pub fn max_var(&self) -> u32 {
        self.max_var
    }

    pub fn kind(&self, v: Var) -> Option<NodeKind> {
        self.kinds.get(v.index()).copied().flatten()
    }

    pub fn inputs(&self) -> &[Var] {
        &self.inputs
    }

    pub fn latches(&self) -> &[Latch] {
        &self.latches
    }

    pub fn gates(&self) -> &[AndGate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Lit] {
        &self.outputs
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_latches(&self) -> usize {
        self.latches.len()
    }

    pub fn is_latch(&self, v: Var) -> bool {
        matches!(self.kind(v), Some(NodeKind::Latch(_)))
    }

    pub fn latch_index(&self, v: Var) -> Option<usize> {
        match self.kind(v) {
            Some(NodeKind::Latch(i)) => Some(i),
            _ => None,
        }
    }

    pub fn input_index(&self, v: Var) -> Option<usize> {
        match self.kind(v) {
            Some(NodeKind::Input(i)) => Some(i),
            _ => None,
        }
    }

    pub(crate) fn explicit_names(&self, class: SymbolClass) -> &[Option<String>] {
        match class {
            SymbolClass::Input => &self.input_names,
            SymbolClass::Latch => &self.latch_names,
            SymbolClass::Output => &self.output_names,
        }
    }

    pub(crate) fn explicit_names_mut(&mut self, class: SymbolClass) -> &mut Vec<Option<String>> {
        match class {
            SymbolClass::Input => &mut self.input_names,
            SymbolClass::Latch => &mut self.latch_names,
            SymbolClass::Output => &mut self.output_names,
        }
    }

    fn name_of(&self, class: SymbolClass, i: usize) -> String {
        match &self.explicit_names(class)[i] {
            Some(n) => n.clone(),
            None => format!("{}{}", class.prefix(), i),
        }
    }

    /// Symbol of input `i`, or the synthesized `i<i>`.
    pub fn input_name(&self, i: usize) -> String {
        self.name_of(SymbolClass::Input, i)
    }

    /// Symbol of latch `i`, or the synthesized `l<i>`.
    pub fn latch_name(&self, i: usize) -> String {
        self.name_of(SymbolClass::Latch, i)
    }

    /// Symbol of output `i`, or the synthesized `o<i>`.
    pub fn output_name(&self, i: usize) -> String {
        self.name_of(SymbolClass::Output, i)
    }

    pub fn find_latch(&self, name: &str) -> Option<usize> {
        (0..self.latches.len()).find(|&i| self.latch_name(i) == name)
    }

    pub fn find_input(&self, name: &str) -> Option<usize> {
        (0..self.inputs.len()).find(|&i| self.input_name(i) == name)
    }

    pub fn find_output(&self, name: &str) -> Option<usize> {
        (0..self.outputs.len()).find(|&i| self.output_name(i) == name)
    }

    /// Resolves a target given either as an output symbol or as `o<index>`
    /// / a bare index.
    pub fn resolve_output(&self, target: &str) -> Option<usize> {
        if let Some(i) = self.find_output(target) {
            return Some(i);
        }
        let digits = target.strip_prefix('o').unwrap_or(target);
        digits.parse::<usize>().ok().filter(|&i| i < self.outputs.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and_folds_constants() {
        let mut n = Netlist::new();
        let a = n.add_input(None);
        assert_eq!(n.and(a, Lit::FALSE), Lit::FALSE);
        assert_eq!(n.and(a, Lit::TRUE), a);
        assert_eq!(n.and(a, !a), Lit::FALSE);
        assert_eq!(n.and(a, a), a);
        assert!(n.gates().is_empty());
    }

    #[test]
    fn strash_reuses_gates() {
        let mut n = Netlist::new();
        let a = n.add_input(None);
        let b = n.add_input(None);
        let g1 = n.and(a, b);
        let g2 = n.and(b, a);
        assert_eq!(g1, g2);
        assert_eq!(n.gates().len(), 1);
    }

    #[test]
    fn synthesized_names() {
        let mut n = Netlist::new();
        n.add_input(Some("start"));
        n.add_input(None);
        let l = n.add_latch(None);
        n.add_output(l, None);
        assert_eq!(n.input_name(0), "start");
        assert_eq!(n.input_name(1), "i1");
        assert_eq!(n.latch_name(0), "l0");
        assert_eq!(n.output_name(0), "o0");
        assert_eq!(n.resolve_output("o0"), Some(0));
        assert_eq!(n.resolve_output("0"), Some(0));
        assert_eq!(n.resolve_output("o1"), None);
    }

    #[test]
    fn records_reject_cycles() {
        // v1 = v2 & v2', v2 = v1 & 1 -> cycle
        let gates = vec![
            AndGate { var: Var(1), lhs: Lit::new(Var(2), false), rhs: Lit::TRUE },
            AndGate { var: Var(2), lhs: Lit::new(Var(1), false), rhs: Lit::TRUE },
        ];
        let err = Netlist::from_records(2, vec![], vec![], gates, vec![]).unwrap_err();
        assert!(matches!(err, NetlistError::Cycle(_)));
    }

    #[test]
    fn records_sort_out_of_order_gates() {
        let gates = vec![
            AndGate { var: Var(3), lhs: Lit::new(Var(2), false), rhs: Lit::new(Var(1), false) },
            AndGate { var: Var(2), lhs: Lit::new(Var(1), false), rhs: Lit::new(Var(1), true) },
        ];
        let n = Netlist::from_records(3, vec![Var(1)], vec![], gates, vec![Lit::new(Var(3), false)]).unwrap();
        assert_eq!(n.gates()[0].var, Var(2));
        n.validate().unwrap();
    }

    #[test]
    fn dangling_literal_rejected() {
        let err = Netlist::from_records(2, vec![Var(1)], vec![], vec![], vec![Lit::new(Var(2), false)]).unwrap_err();
        assert_eq!(err, NetlistError::Dangling(Lit::new(Var(2), false)));
    }
}
