// SPDX-License-Identifier: Apache-2.0

//! Lowers a predicate to AND gates plus shadow latches and exposes its
//! negation as a monitor output.

use std::collections::HashMap;

use super::expr::{reset_value, CmpOp, CompileError, Operand, Pred, Signals};
use super::Helper;
use crate::netlist::{Lit, Netlist};

/// Name prefix of every latch added by compilation.
pub const SHADOW_PREFIX: &str = "__shadow_";

/// Output name prefix of monitors.
pub const MONITOR_PREFIX: &str = "monitor:";

#[derive(Debug, Clone)]
pub struct Compiled {
    /// The input netlist with gates, shadow latches and one output appended.
    pub netlist: Netlist,
    /// Index of the monitor output; it is 1 exactly when the predicate fails.
    pub monitor: usize,
    pub shadow_latches: usize,
}

pub fn is_shadow_name(name: &str) -> bool {
    name.starts_with(SHADOW_PREFIX) || name.starts_with(&format!("!{SHADOW_PREFIX}"))
}

struct Compiler<'a> {
    net: Netlist,
    signals: &'a Signals,
    past: HashMap<Lit, Lit>,
    shadows: usize,
}

impl Compiler<'_> {
    fn shadow(&mut self, what: &str) -> Lit {
        let name = format!("{SHADOW_PREFIX}{}_{what}", self.shadows);
        self.shadows += 1;
        self.net.add_latch(Some(&name))
    }

    /// Previous-cycle value of `l`, starting from its reset value.
    fn past(&mut self, l: Lit) -> Lit {
        if l.is_const() {
            return l;
        }
        if let Some(&p) = self.past.get(&l) {
            return p;
        }
        let v0 = reset_value(&self.net, l);
        let s = self.shadow("past");
        // the shadow stores l xor v0 so that its all-zero reset reads v0
        self.net.set_next(s.var(), l.xor(v0));
        let p = s.xor(v0);
        self.past.insert(l, p);
        p
    }

    fn bits(&mut self, o: &Operand, width: usize) -> Vec<Lit> {
        match o {
            Operand::Const(c) => {
                (0..width).map(|i| if i < 64 && c >> i & 1 == 1 { Lit::TRUE } else { Lit::FALSE }).collect()
            }
            Operand::Group { name, prev } => {
                let group = self.signals.get(name).expect("checked").to_vec();
                let mut out: Vec<Lit> = group.into_iter().map(|l| if *prev { self.past(l) } else { l }).collect();
                out.resize(width, Lit::FALSE);
                out
            }
        }
    }

    /// Unsigned a < b, LSB first.
    fn less(&mut self, a: &[Lit], b: &[Lit]) -> Lit {
        let mut lt = Lit::FALSE;
        for (&x, &y) in a.iter().zip(b) {
            let here = self.net.and(!x, y);
            let eq = self.net.xnor(x, y);
            let keep = self.net.and(eq, lt);
            lt = self.net.or(here, keep);
        }
        lt
    }

    fn equal(&mut self, a: &[Lit], b: &[Lit]) -> Lit {
        let eqs: Vec<Lit> = a.iter().zip(b).map(|(&x, &y)| self.net.xnor(x, y)).collect();
        self.net.and_all(eqs)
    }

    fn lower(&mut self, p: &Pred) -> Result<Lit, CompileError> {
        Ok(match p {
            Pred::True => Lit::TRUE,
            Pred::False => Lit::FALSE,
            Pred::Bit { signal, bit, prev } => {
                let l = self.signals.bit(signal, *bit)?;
                if *prev {
                    self.past(l)
                } else {
                    l
                }
            }
            Pred::Cmp { op, lhs, rhs } => {
                let w = self.signals.cmp_width(lhs, rhs)?;
                let a = self.bits(lhs, w);
                let b = self.bits(rhs, w);
                match op {
                    CmpOp::Eq => self.equal(&a, &b),
                    CmpOp::Ne => !self.equal(&a, &b),
                    CmpOp::Lt => self.less(&a, &b),
                    CmpOp::Ge => !self.less(&a, &b),
                    CmpOp::Gt => self.less(&b, &a),
                    CmpOp::Le => !self.less(&b, &a),
                }
            }
            Pred::Not(a) => !self.lower(a)?,
            Pred::And(v) => {
                let ls = v.iter().map(|q| self.lower(q)).collect::<Result<Vec<_>, _>>()?;
                self.net.and_all(ls)
            }
            Pred::Or(v) => {
                let ls = v.iter().map(|q| self.lower(q)).collect::<Result<Vec<_>, _>>()?;
                self.net.or_all(ls)
            }
            Pred::Implies(a, b) => {
                let a = self.lower(a)?;
                let b = self.lower(b)?;
                self.net.or(!a, b)
            }
            Pred::Xor(a, b) => {
                let a = self.lower(a)?;
                let b = self.lower(b)?;
                self.net.xor(a, b)
            }
            Pred::ExactlyOne(v) | Pred::AtMostOne(v) => {
                let ls = v.iter().map(|q| self.lower(q)).collect::<Result<Vec<_>, _>>()?;
                let mut seen = Lit::FALSE;
                let mut amo = Lit::TRUE;
                for l in ls {
                    let clash = self.net.and(seen, l);
                    amo = self.net.and(amo, !clash);
                    seen = self.net.or(seen, l);
                }
                if matches!(p, Pred::ExactlyOne(_)) {
                    self.net.and(amo, seen)
                } else {
                    amo
                }
            }
            Pred::Sticky { set, clear } => {
                let s = self.shadow("sticky");
                let set = self.lower(set)?;
                let clear = self.lower(clear)?;
                let held = self.net.or(s, set);
                let next = self.net.and(held, !clear);
                self.net.set_next(s.var(), next);
                s
            }
        })
    }
}

/// Appends the monitor of `pred` to a copy of `netlist`. The output is
/// named `monitor:<id>`.
pub fn compile_pred(netlist: &Netlist, id: &str, pred: &Pred) -> Result<Compiled, CompileError> {
    let signals = Signals::new(netlist);
    signals.check(pred)?;
    let mut c = Compiler { net: netlist.clone(), signals: &signals, past: HashMap::new(), shadows: 0 };
    let ok = c.lower(pred)?;
    let monitor = c.net.add_output(!ok, Some(&format!("{MONITOR_PREFIX}{id}")));
    Ok(Compiled { netlist: c.net, monitor, shadow_latches: c.shadows })
}

pub fn compile_helper(netlist: &Netlist, helper: &Helper) -> Result<Compiled, CompileError> {
    compile_pred(netlist, &helper.id, &helper.predicate)
}
