// SPDX-License-Identifier: Apache-2.0

//! Predicate AST over named signal groups, its text form, and a direct
//! interpreter used as an oracle for compiled monitors.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::{group_signals, Lit, Netlist, NodeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn apply(self, a: u64, b: u64) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }
}

/// Unsigned comparator operand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operand {
    Group {
        name: String,
        #[serde(default)]
        prev: bool,
    },
    Const(u64),
}

impl Operand {
    pub fn group(name: &str) -> Operand {
        Operand::Group { name: name.to_owned(), prev: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pred {
    True,
    False,
    /// Bit `bit` of a group; `None` names a single-bit signal.
    Bit {
        signal: String,
        bit: Option<usize>,
        #[serde(default)]
        prev: bool,
    },
    Cmp {
        op: CmpOp,
        lhs: Operand,
        rhs: Operand,
    },
    Not(Box<Pred>),
    And(Vec<Pred>),
    Or(Vec<Pred>),
    Implies(Box<Pred>, Box<Pred>),
    Xor(Box<Pred>, Box<Pred>),
    ExactlyOne(Vec<Pred>),
    AtMostOne(Vec<Pred>),
    /// Holds from the cycle after `set` until the cycle after `clear`;
    /// false at reset.
    Sticky {
        set: Box<Pred>,
        clear: Box<Pred>,
    },
}

impl Pred {
    pub fn bit(signal: &str, bit: Option<usize>) -> Pred {
        Pred::Bit { signal: signal.to_owned(), bit, prev: false }
    }

    pub fn past(signal: &str, bit: Option<usize>) -> Pred {
        Pred::Bit { signal: signal.to_owned(), bit, prev: true }
    }

    pub fn cmp(op: CmpOp, lhs: Operand, rhs: Operand) -> Pred {
        Pred::Cmp { op, lhs, rhs }
    }

    /// Negation that cancels a double negation.
    pub fn not(p: Pred) -> Pred {
        match p {
            Pred::Not(inner) => *inner,
            Pred::True => Pred::False,
            Pred::False => Pred::True,
            p => Pred::Not(Box::new(p)),
        }
    }

    pub fn implies(a: Pred, b: Pred) -> Pred {
        Pred::Implies(Box::new(a), Box::new(b))
    }

    pub fn xor(a: Pred, b: Pred) -> Pred {
        Pred::Xor(Box::new(a), Box::new(b))
    }

    pub fn sticky(set: Pred, clear: Pred) -> Pred {
        Pred::Sticky { set: Box::new(set), clear: Box::new(clear) }
    }

    /// Signal names referenced anywhere in the predicate.
    pub fn signals(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.visit(&mut |p| match p {
            Pred::Bit { signal, .. } => out.push(signal.as_str()),
            Pred::Cmp { lhs, rhs, .. } => {
                for o in [lhs, rhs] {
                    if let Operand::Group { name, .. } = o {
                        out.push(name.as_str());
                    }
                }
            }
            _ => {}
        });
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Pred)) {
        f(self);
        match self {
            Pred::Not(a) => a.visit(f),
            Pred::And(v) | Pred::Or(v) | Pred::ExactlyOne(v) | Pred::AtMostOne(v) => {
                for p in v {
                    p.visit(f);
                }
            }
            Pred::Implies(a, b) | Pred::Xor(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Pred::Sticky { set, clear } => {
                set.visit(f);
                clear.visit(f);
            }
            _ => {}
        }
    }

    /// Whether any node refers to a previous value or holds state.
    pub fn is_temporal(&self) -> bool {
        let mut t = false;
        self.visit(&mut |p| match p {
            Pred::Bit { prev: true, .. } | Pred::Sticky { .. } => t = true,
            Pred::Cmp { lhs, rhs, .. } => {
                for o in [lhs, rhs] {
                    if let Operand::Group { prev: true, .. } = o {
                        t = true;
                    }
                }
            }
            _ => {}
        });
        t
    }

    fn is_atomic(&self) -> bool {
        !matches!(self, Pred::Cmp { .. } | Pred::And(_) | Pred::Or(_) | Pred::Implies(..) | Pred::Xor(..))
    }
}

struct Child<'a>(&'a Pred);

impl fmt::Display for Child<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_atomic() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Group { name, prev: false } => write!(f, "{name}"),
            Operand::Group { name, prev: true } => write!(f, "past({name})"),
            Operand::Const(c) => write!(f, "{c}"),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, items: &[Pred], sep: &str, wrap: bool) -> fmt::Result {
    for (i, p) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        if wrap {
            write!(f, "{}", Child(p))?;
        } else {
            write!(f, "{p}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::True => f.write_str("true"),
            Pred::False => f.write_str("false"),
            Pred::Bit { signal, bit, prev } => {
                let name = match bit {
                    Some(k) => format!("{signal}[{k}]"),
                    None => signal.clone(),
                };
                if *prev {
                    write!(f, "past({name})")
                } else {
                    f.write_str(&name)
                }
            }
            Pred::Cmp { op, lhs, rhs } => write!(f, "{lhs} {} {rhs}", op.symbol()),
            Pred::Not(a) => write!(f, "!{}", Child(a)),
            Pred::And(v) if v.is_empty() => f.write_str("true"),
            Pred::Or(v) if v.is_empty() => f.write_str("false"),
            Pred::And(v) => join(f, v, " & ", true),
            Pred::Or(v) => join(f, v, " | ", true),
            Pred::Implies(a, b) => write!(f, "{} -> {}", Child(a), Child(b)),
            Pred::Xor(a, b) => write!(f, "{} ^ {}", Child(a), Child(b)),
            Pred::ExactlyOne(v) => {
                f.write_str("exactly_one(")?;
                join(f, v, ", ", false)?;
                f.write_str(")")
            }
            Pred::AtMostOne(v) => {
                f.write_str("at_most_one(")?;
                join(f, v, ", ", false)?;
                f.write_str(")")
            }
            Pred::Sticky { set, clear } => write!(f, "sticky({set}, {clear})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("unknown signal `{0}`")]
    UnknownSignal(String),
    #[error("bit {bit} of `{signal}` is out of range (width {width})")]
    BitOutOfRange { signal: String, bit: usize, width: usize },
    #[error("`{0}` is not a single-bit signal")]
    NotABit(String),
    #[error("comparator operands `{lhs}` ({lw} bits) and `{rhs}` ({rw} bits) differ in width")]
    WidthMismatch { lhs: String, lw: usize, rhs: String, rw: usize },
}

/// Where a resolved signal comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalClass {
    Latch,
    Input,
    Output,
}

/// Word-level view of a netlist's symbols: latch groups, then input groups,
/// then output groups. An earlier class shadows a later one of the same
/// name.
#[derive(Debug, Clone, Default)]
pub struct Signals {
    map: HashMap<String, (SignalClass, Vec<Lit>)>,
    order: Vec<String>,
}

impl Signals {
    pub fn new(netlist: &Netlist) -> Signals {
        let mut s = Signals::default();
        let latches: Vec<(String, Lit)> =
            (0..netlist.num_latches()).map(|i| (netlist.latch_name(i), netlist.latches()[i].var.lit())).collect();
        let inputs: Vec<(String, Lit)> =
            (0..netlist.num_inputs()).map(|i| (netlist.input_name(i), netlist.inputs()[i].lit())).collect();
        let outputs: Vec<(String, Lit)> =
            (0..netlist.outputs().len()).map(|i| (netlist.output_name(i), netlist.outputs()[i])).collect();
        for (class, entries) in
            [(SignalClass::Latch, latches), (SignalClass::Input, inputs), (SignalClass::Output, outputs)]
        {
            for g in group_signals(&entries).0 {
                if !s.map.contains_key(&g.name) {
                    s.order.push(g.name.clone());
                    s.map.insert(g.name, (class, g.bits));
                }
            }
        }
        s
    }

    pub fn get(&self, name: &str) -> Option<&[Lit]> {
        self.map.get(name).map(|(_, b)| b.as_slice())
    }

    pub fn class(&self, name: &str) -> Option<SignalClass> {
        self.map.get(name).map(|(c, _)| *c)
    }

    /// Group names in symbol-table order.
    pub fn names(&self) -> &[String] {
        &self.order
    }

    fn group(&self, name: &str) -> Result<&[Lit], CompileError> {
        self.get(name).ok_or_else(|| CompileError::UnknownSignal(name.to_owned()))
    }

    /// Literal of a bit reference.
    pub fn bit(&self, signal: &str, bit: Option<usize>) -> Result<Lit, CompileError> {
        let bits = self.group(signal)?;
        match bit {
            None if bits.len() == 1 => Ok(bits[0]),
            None => Err(CompileError::NotABit(signal.to_owned())),
            Some(k) => bits.get(k).copied().ok_or(CompileError::BitOutOfRange {
                signal: signal.to_owned(),
                bit: k,
                width: bits.len(),
            }),
        }
    }

    /// Resolves a manifest flag reference, either a single-bit signal or
    /// `name[k]`, to a bit predicate.
    pub fn bit_ref(&self, reference: &str) -> Result<Pred, CompileError> {
        if self.get(reference).is_some() {
            self.bit(reference, None)?;
            return Ok(Pred::bit(reference, None));
        }
        if let Some(s) = reference.strip_suffix(']') {
            if let Some(p) = s.rfind('[') {
                if let Ok(k) = s[p + 1..].parse::<usize>() {
                    self.bit(&s[..p], Some(k))?;
                    return Ok(Pred::bit(&s[..p], Some(k)));
                }
            }
        }
        Err(CompileError::UnknownSignal(reference.to_owned()))
    }

    /// Comparator widths: group operands must agree; constants widen the
    /// comparison to their bit length.
    pub fn cmp_width(&self, lhs: &Operand, rhs: &Operand) -> Result<usize, CompileError> {
        let width = |o: &Operand| -> Result<(usize, bool), CompileError> {
            match o {
                Operand::Group { name, .. } => Ok((self.group(name)?.len(), true)),
                Operand::Const(c) => Ok(((64 - c.leading_zeros()) as usize, false)),
            }
        };
        let (lw, lg) = width(lhs)?;
        let (rw, rg) = width(rhs)?;
        if lg && rg && lw != rw {
            return Err(CompileError::WidthMismatch { lhs: lhs.to_string(), lw, rhs: rhs.to_string(), rw });
        }
        Ok(lw.max(rw).max(1))
    }

    /// Type-checks `p`.
    pub fn check(&self, p: &Pred) -> Result<(), CompileError> {
        let mut err = None;
        p.visit(&mut |q| {
            if err.is_some() {
                return;
            }
            let r = match q {
                Pred::Bit { signal, bit, .. } => self.bit(signal, *bit).map(|_| ()),
                Pred::Cmp { lhs, rhs, .. } => self.cmp_width(lhs, rhs).map(|_| ()),
                _ => Ok(()),
            };
            err = r.err();
        });
        err.map_or(Ok(()), Err)
    }
}

/// Value a literal takes in the reset state when it is a latch literal;
/// other literals are taken as 0 before the first cycle.
pub fn reset_value(netlist: &Netlist, lit: Lit) -> bool {
    match netlist.kind(lit.var()) {
        Some(NodeKind::Latch(_)) => lit.is_negated(),
        Some(NodeKind::Const) => lit.is_negated(),
        _ => false,
    }
}

/// Steps a predicate over a simulation, one cycle at a time.
pub struct Interpreter<'a> {
    netlist: &'a Netlist,
    signals: &'a Signals,
    pred: &'a Pred,
    sticky: Vec<bool>,
    prev: Option<Vec<bool>>,
}

impl<'a> Interpreter<'a> {
    pub fn new(netlist: &'a Netlist, signals: &'a Signals, pred: &'a Pred) -> Result<Self, CompileError> {
        signals.check(pred)?;
        let mut n = 0;
        pred.visit(&mut |p| {
            if matches!(p, Pred::Sticky { .. }) {
                n += 1;
            }
        });
        Ok(Interpreter { netlist, signals, pred, sticky: vec![false; n], prev: None })
    }

    /// Predicate value in the cycle whose node values (from
    /// [`Netlist::eval_nodes`]) are `vals`; advances to the next cycle.
    pub fn step(&mut self, vals: &[bool]) -> bool {
        let mut next = self.sticky.clone();
        let mut idx = 0;
        let v = self.eval(self.pred, vals, &mut idx, &mut next);
        self.sticky = next;
        self.prev = Some(vals.to_vec());
        v
    }

    fn lit(&self, l: Lit, vals: &[bool], prev: bool) -> bool {
        if !prev {
            return Netlist::lit_value(vals, l);
        }
        match &self.prev {
            Some(p) => Netlist::lit_value(p, l),
            None => reset_value(self.netlist, l),
        }
    }

    fn value(&self, o: &Operand, width: usize, vals: &[bool]) -> u64 {
        match o {
            Operand::Const(c) => *c,
            Operand::Group { name, prev } => {
                let bits = self.signals.get(name).expect("checked");
                bits.iter().take(width).enumerate().fold(0, |acc, (i, &l)| acc | (self.lit(l, vals, *prev) as u64) << i)
            }
        }
    }

    fn eval(&self, p: &Pred, vals: &[bool], idx: &mut usize, next: &mut [bool]) -> bool {
        // every child is evaluated so sticky numbering stays pre-order
        match p {
            Pred::True => true,
            Pred::False => false,
            Pred::Bit { signal, bit, prev } => {
                let l = self.signals.bit(signal, *bit).expect("checked");
                self.lit(l, vals, *prev)
            }
            Pred::Cmp { op, lhs, rhs } => {
                let w = self.signals.cmp_width(lhs, rhs).expect("checked");
                op.apply(self.value(lhs, w, vals), self.value(rhs, w, vals))
            }
            Pred::Not(a) => !self.eval(a, vals, idx, next),
            Pred::And(v) => v.iter().map(|q| self.eval(q, vals, idx, next)).fold(true, |a, b| a & b),
            Pred::Or(v) => v.iter().map(|q| self.eval(q, vals, idx, next)).fold(false, |a, b| a | b),
            Pred::Implies(a, b) => {
                let a = self.eval(a, vals, idx, next);
                let b = self.eval(b, vals, idx, next);
                !a || b
            }
            Pred::Xor(a, b) => self.eval(a, vals, idx, next) ^ self.eval(b, vals, idx, next),
            Pred::ExactlyOne(v) => v.iter().filter(|q| self.eval(q, vals, idx, next)).count() == 1,
            Pred::AtMostOne(v) => v.iter().filter(|q| self.eval(q, vals, idx, next)).count() <= 1,
            Pred::Sticky { set, clear } => {
                let me = *idx;
                *idx += 1;
                let s = self.sticky[me];
                let set = self.eval(set, vals, idx, next);
                let clear = self.eval(clear, vals, idx, next);
                next[me] = (s || set) && !clear;
                s
            }
        }
    }
}

/// Predicate value at every cycle of `trace` run from reset.
pub fn interpret(netlist: &Netlist, pred: &Pred, trace: &[Vec<bool>]) -> Result<Vec<bool>, CompileError> {
    let signals = Signals::new(netlist);
    let mut it = Interpreter::new(netlist, &signals, pred)?;
    let mut state = vec![false; netlist.num_latches()];
    let mut out = Vec::with_capacity(trace.len());
    for inputs in trace {
        let vals = netlist.eval_nodes(&state, inputs);
        out.push(it.step(&vals));
        state = netlist.latches().iter().map(|l| Netlist::lit_value(&vals, l.next)).collect();
    }
    Ok(out)
}
