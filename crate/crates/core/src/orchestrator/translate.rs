// SPDX-License-Identifier: Apache-2.0

//! Moves invariant clauses from a monitored netlist back onto the design by
//! latch symbol name.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::clause::Clause;
use crate::netlist::{Lit, Netlist, Var};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Translation {
    pub clauses: Vec<Clause>,
    /// Clauses mentioning a latch with no counterpart in the target.
    pub dropped: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("latch symbol `{0}` is not unique")]
    Ambiguous(String),
    #[error("clause literal {0} is not a latch")]
    NotALatch(Lit),
}

fn name_index(netlist: &Netlist) -> (HashMap<String, Var>, HashSet<String>) {
    let mut index = HashMap::new();
    let mut dup = HashSet::new();
    for (i, l) in netlist.latches().iter().enumerate() {
        let name = netlist.latch_name(i);
        if index.insert(name.clone(), l.var).is_some() {
            dup.insert(name);
        }
    }
    (index, dup)
}

/// Remaps every literal of `invariant` (over latches of `from`) to the latch
/// of `to` with the same symbol. Clauses with an unmatched latch are dropped;
/// the result is deduplicated and free of tautologies, in first-seen order.
pub fn translate(invariant: &[Clause], from: &Netlist, to: &Netlist) -> Result<Translation, TranslateError> {
    let (target, target_dup) = name_index(to);
    let (_, source_dup) = name_index(from);
    let mut out = Translation::default();
    let mut seen = HashSet::new();
    'clauses: for c in invariant {
        let mut lits = Vec::with_capacity(c.len());
        for &l in c.lits() {
            let i = from.latch_index(l.var()).ok_or(TranslateError::NotALatch(l))?;
            let name = from.latch_name(i);
            if source_dup.contains(&name) || target_dup.contains(&name) {
                return Err(TranslateError::Ambiguous(name));
            }
            match target.get(&name) {
                Some(&v) => lits.push(Lit::new(v, l.is_negated())),
                None => {
                    out.dropped += 1;
                    continue 'clauses;
                }
            }
        }
        let t = Clause::new(lits);
        if !t.is_tautology() && seen.insert(t.clone()) {
            out.clauses.push(t);
        }
    }
    Ok(out)
}
