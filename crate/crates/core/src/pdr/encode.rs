// SPDX-License-Identifier: Apache-2.0

//! Lazy Tseitin encoding of a netlist's transition relation into a solver.

use crate::netlist::{Lit, Netlist, NodeKind, Var};
use crate::sat::{SLit, SVar, Solver};

/// Maps netlist nodes to solver variables. Gates are encoded on first use,
/// so only the cones actually queried end up in the clause database.
#[derive(Debug, Clone)]
pub struct Encoder {
    node: Vec<Option<SVar>>,
    primed: Vec<Option<SVar>>,
    /// Solver variable → latch index, for primed variables.
    primed_owner: Vec<Option<usize>>,
    /// Solver variable → netlist variable, for current-state latches.
    current_owner: Vec<Option<Var>>,
}

impl Encoder {
    pub fn new(netlist: &Netlist, solver: &mut Solver) -> Self {
        let mut e = Encoder {
            node: vec![None; netlist.max_var() as usize + 1],
            primed: vec![None; netlist.num_latches()],
            primed_owner: Vec::new(),
            current_owner: Vec::new(),
        };
        let f = solver.new_var();
        solver.add_clause(&[f.neg()]);
        e.node[0] = Some(f);
        e
    }

    fn note(owner: &mut Vec<Option<impl Copy>>, v: SVar) {
        if owner.len() <= v.0 as usize {
            owner.resize(v.0 as usize + 1, None);
        }
    }

    /// Solver literal of a current-state netlist literal.
    pub fn lit(&mut self, netlist: &Netlist, solver: &mut Solver, lit: Lit) -> SLit {
        let v = self.var(netlist, solver, lit.var());
        v.lit(lit.is_negated())
    }

    fn fresh(&mut self, netlist: &Netlist, solver: &mut Solver, v: Var) -> SVar {
        let s = solver.new_var();
        self.node[v.index()] = Some(s);
        if netlist.is_latch(v) {
            Self::note(&mut self.current_owner, s);
            self.current_owner[s.0 as usize] = Some(v);
        }
        s
    }

    fn var(&mut self, netlist: &Netlist, solver: &mut Solver, root: Var) -> SVar {
        if let Some(s) = self.node[root.index()] {
            return s;
        }
        let mut stack = vec![root];
        while let Some(&v) = stack.last() {
            if self.node[v.index()].is_some() {
                stack.pop();
                continue;
            }
            match netlist.kind(v) {
                Some(NodeKind::And(i)) => {
                    let g = &netlist.gates()[i];
                    let (a, b) = (g.lhs, g.rhs);
                    let mut pending = false;
                    for c in [a.var(), b.var()] {
                        if self.node[c.index()].is_none() {
                            stack.push(c);
                            pending = true;
                        }
                    }
                    if pending {
                        continue;
                    }
                    stack.pop();
                    let out = self.fresh(netlist, solver, v);
                    let la = self.node[a.var().index()].unwrap().lit(a.is_negated());
                    let lb = self.node[b.var().index()].unwrap().lit(b.is_negated());
                    solver.add_clause(&[out.neg(), la]);
                    solver.add_clause(&[out.neg(), lb]);
                    solver.add_clause(&[out.pos(), !la, !lb]);
                }
                _ => {
                    stack.pop();
                    self.fresh(netlist, solver, v);
                }
            }
        }
        self.node[root.index()].unwrap()
    }

    /// Solver literal of latch `latch_lit` in the next state.
    pub fn primed(&mut self, netlist: &Netlist, solver: &mut Solver, latch_lit: Lit) -> SLit {
        let i = netlist.latch_index(latch_lit.var()).expect("primed literal over a latch");
        let v = match self.primed[i] {
            Some(v) => v,
            None => {
                let next = self.lit(netlist, solver, netlist.latches()[i].next);
                let p = solver.new_var();
                solver.add_clause(&[p.neg(), next]);
                solver.add_clause(&[p.pos(), !next]);
                self.primed[i] = Some(p);
                Self::note(&mut self.primed_owner, p);
                self.primed_owner[p.0 as usize] = Some(i);
                p
            }
        };
        v.lit(latch_lit.is_negated())
    }

    /// Latch literal whose primed encoding is `s`.
    pub fn unprime(&self, netlist: &Netlist, s: SLit) -> Option<Lit> {
        let i = (*self.primed_owner.get(s.var().0 as usize)?)?;
        Some(Lit::new(netlist.latches()[i].var, s.is_neg()))
    }

    /// Latch literal whose current-state encoding is `s`.
    pub fn uncurrent(&self, s: SLit) -> Option<Lit> {
        let v = (*self.current_owner.get(s.var().0 as usize)?)?;
        Some(Lit::new(v, s.is_neg()))
    }

    /// Encoded variable of `v`, if any.
    pub fn existing(&self, v: Var) -> Option<SVar> {
        self.node[v.index()]
    }

    /// Value of netlist variable `v` in the solver's last model; variables
    /// never encoded read as false.
    pub fn model(&self, solver: &Solver, v: Var) -> bool {
        self.node[v.index()].is_some_and(|s| solver.model_value(s.pos()))
    }
}
