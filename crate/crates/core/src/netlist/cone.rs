// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use super::{Netlist, NodeKind, Var};

/// Latches and inputs in the transitive fan-in of `roots`.
///
/// Traversal follows gate edges and, when a latch is reached, continues into
/// its next-state function, so the result is closed over time: a register
/// that influences a root only through a multi-cycle path is included. A root
/// that is itself a latch or input belongs to the result.
pub fn tfi_registers(netlist: &Netlist, roots: &[Var]) -> BTreeSet<Var> {
    let mut seen = vec![false; netlist.max_var() as usize + 1];
    let mut stack: Vec<Var> = roots.to_vec();
    let mut regs = BTreeSet::new();
    while let Some(v) = stack.pop() {
        if std::mem::replace(&mut seen[v.index()], true) {
            continue;
        }
        match netlist.kind(v) {
            Some(NodeKind::Input(_)) => {
                regs.insert(v);
            }
            Some(NodeKind::Latch(i)) => {
                regs.insert(v);
                stack.push(netlist.latches()[i].next.var());
            }
            Some(NodeKind::And(i)) => {
                let g = &netlist.gates()[i];
                stack.push(g.lhs.var());
                stack.push(g.rhs.var());
            }
            Some(NodeKind::Const) | None => {}
        }
    }
    regs
}
