// SPDX-License-Identifier: Apache-2.0

//! Clauses and cubes over latch literals, plus the text exchange format.
//!
//! Exchange format: one clause per line, whitespace-separated latch symbol
//! names, a leading `-` negates. Blank lines and lines starting with `#` are
//! ignored. An empty clause cannot be written.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::{Lit, Netlist};

/// Disjunction of latch literals, kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Clause(Vec<Lit>);

/// Conjunction of latch literals, kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cube(Vec<Lit>);

fn normalize(mut lits: Vec<Lit>) -> Vec<Lit> {
    lits.sort_unstable();
    lits.dedup();
    lits
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Self {
        Clause(normalize(lits.into_iter().collect()))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.0.windows(2).any(|w| w[0] == !w[1])
    }

    /// The cube of states this clause excludes.
    pub fn negate(&self) -> Cube {
        Cube::new(self.0.iter().map(|&l| !l))
    }

    /// True when every literal of `self` is in `other` (so `self` implies
    /// `other`).
    pub fn subsumes(&self, other: &Clause) -> bool {
        subset(&self.0, &other.0)
    }

    /// True when the all-zero reset state satisfies the clause.
    pub fn holds_at_reset(&self) -> bool {
        self.0.iter().any(|l| l.is_negated())
    }

    pub fn eval(&self, value: impl Fn(Lit) -> bool) -> bool {
        self.0.iter().any(|&l| value(l))
    }
}

impl Cube {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Self {
        Cube(normalize(lits.into_iter().collect()))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negate(&self) -> Clause {
        Clause::new(self.0.iter().map(|&l| !l))
    }

    /// True when the all-zero reset state lies in the cube.
    pub fn contains_reset(&self) -> bool {
        self.0.iter().all(|l| l.is_negated())
    }

    /// True when every literal of `self` is in `other` (so `other` implies
    /// `self`).
    pub fn is_subset_of(&self, other: &Cube) -> bool {
        subset(&self.0, &other.0)
    }

    pub fn without(&self, lit: Lit) -> Cube {
        Cube(self.0.iter().copied().filter(|&l| l != lit).collect())
    }
}

fn subset(a: &[Lit], b: &[Lit]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().map(|l| format!("{}{}", if l.is_negated() { "-" } else { "" }, l.var().0)).collect();
        write!(f, "({})", parts.join(" | "))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClauseFileError {
    #[error("line {line}: unknown latch `{name}`")]
    UnknownLatch { line: usize, name: String },
    #[error("line {line}: latch symbol `{name}` is ambiguous")]
    Ambiguous { line: usize, name: String },
    #[error("clause literal {0} is not a latch")]
    NotALatch(Lit),
}

/// Renders clauses in the exchange format using latch symbols of `netlist`.
pub fn write_clauses(netlist: &Netlist, clauses: &[Clause]) -> Result<String, ClauseFileError> {
    let mut out = String::new();
    for c in clauses {
        let mut parts = Vec::with_capacity(c.len());
        for &l in c.lits() {
            let i = netlist.latch_index(l.var()).ok_or(ClauseFileError::NotALatch(l))?;
            let sign = if l.is_negated() { "-" } else { "" };
            parts.push(format!("{sign}{}", netlist.latch_name(i)));
        }
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// Parses the exchange format against the latch symbols of `netlist`.
pub fn parse_clauses(netlist: &Netlist, text: &str) -> Result<Vec<Clause>, ClauseFileError> {
    let mut index = std::collections::HashMap::new();
    let mut dup = std::collections::HashSet::new();
    for i in 0..netlist.num_latches() {
        if index.insert(netlist.latch_name(i), i).is_some() {
            dup.insert(netlist.latch_name(i));
        }
    }
    let mut clauses = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut lits = Vec::new();
        for tok in line.split_whitespace() {
            let (neg, name) = match tok.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, tok),
            };
            if dup.contains(name) {
                return Err(ClauseFileError::Ambiguous { line: ln + 1, name: name.to_owned() });
            }
            let &i =
                index.get(name).ok_or_else(|| ClauseFileError::UnknownLatch { line: ln + 1, name: name.to_owned() })?;
            lits.push(Lit::new(netlist.latches()[i].var, neg));
        }
        clauses.push(Clause::new(lits));
    }
    Ok(clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::Var;

    fn l(v: u32, neg: bool) -> Lit {
        Lit::new(Var(v), neg)
    }

    #[test]
    fn normalization_and_subsumption() {
        let a = Clause::new([l(3, false), l(1, true), l(3, false)]);
        assert_eq!(a.lits(), &[l(1, true), l(3, false)]);
        let b = Clause::new([l(1, true), l(2, false), l(3, false)]);
        assert!(a.subsumes(&b));
        assert!(!b.subsumes(&a));
        assert!(Clause::new([l(1, true), l(1, false)]).is_tautology());
    }

    #[test]
    fn reset_membership() {
        assert!(Cube::new([l(1, true), l(2, true)]).contains_reset());
        assert!(!Cube::new([l(1, false)]).contains_reset());
        assert!(Cube::new([l(1, false)]).negate().holds_at_reset());
    }

    #[test]
    fn exchange_round_trip() {
        let mut n = Netlist::new();
        let a = n.add_latch(Some("a[0]"));
        let b = n.add_latch(Some("!st[0]"));
        let c = n.add_latch(None);
        let clauses = vec![Clause::new([a, !b]), Clause::new([!c])];
        let text = write_clauses(&n, &clauses).unwrap();
        assert_eq!(text, "a[0] -!st[0]\n-l2\n");
        assert_eq!(parse_clauses(&n, &text).unwrap(), clauses);
        assert!(matches!(parse_clauses(&n, "zz\n"), Err(ClauseFileError::UnknownLatch { line: 1, .. })));
    }
}
