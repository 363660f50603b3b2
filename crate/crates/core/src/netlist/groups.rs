// SPDX-License-Identifier: Apache-2.0

//! Word-level register reconstruction from per-bit symbols.
//!
//! Bit suffixes `name[k]` and `name_k` are recognized; the bracket form wins
//! when both could apply. A leading `!` marks a latch that stores the
//! complement of the named bit (how a reset value of 1 is encoded under the
//! all-zero reset convention), so the group bit is the negated latch literal.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Lit, Netlist};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalGroup {
    pub name: String,
    /// LSB first.
    pub bits: Vec<Lit>,
}

impl SignalGroup {
    pub fn width(&self) -> usize {
        self.bits.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDiagnostic {
    DuplicateIndex { group: String, index: usize, kept: String, dropped: String },
    IndexGap { group: String, indices: Vec<usize> },
    NameClash { name: String },
}

impl std::fmt::Display for GroupDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupDiagnostic::DuplicateIndex { group, index, kept, dropped } => {
                write!(f, "group `{group}`: bit {index} defined by both `{kept}` and `{dropped}`, keeping the first")
            }
            GroupDiagnostic::IndexGap { group, indices } => {
                write!(f, "group `{group}`: non-contiguous bit indices {indices:?}")
            }
            GroupDiagnostic::NameClash { name } => {
                write!(f, "signal `{name}` is both a group and a single bit")
            }
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash, Clone, Copy)]
enum Suffix {
    Bracket,
    Underscore,
}

struct Parsed<'a> {
    base: &'a str,
    index: Option<(usize, Suffix)>,
    inverted: bool,
}

fn parse_name(name: &str) -> Parsed<'_> {
    let (inverted, name) = match name.strip_prefix('!') {
        Some(rest) => (true, rest),
        None => (false, name),
    };
    if let Some(s) = name.strip_suffix(']') {
        if let Some(p) = s.rfind('[') {
            if p > 0 {
                if let Ok(k) = s[p + 1..].parse::<usize>() {
                    return Parsed { base: &s[..p], index: Some((k, Suffix::Bracket)), inverted };
                }
            }
        }
    }
    if let Some(p) = name.rfind('_') {
        let digits = &name[p + 1..];
        if p > 0 && !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            if let Ok(k) = digits.parse::<usize>() {
                return Parsed { base: &name[..p], index: Some((k, Suffix::Underscore)), inverted };
            }
        }
    }
    Parsed { base: name, index: None, inverted }
}

/// Groups named single-bit signals into words.
///
/// Groups appear in order of their first member. Underscore-suffixed names
/// only form a group when their indices are exactly `0..k` with `k >= 2`
/// members; otherwise each stays a singleton under its full name.
pub fn group_signals(entries: &[(String, Lit)]) -> (Vec<SignalGroup>, Vec<GroupDiagnostic>) {
    let mut diags = Vec::new();
    let mut order: Vec<(String, Suffix)> = Vec::new();
    let mut members: HashMap<(String, Suffix), Vec<(usize, Lit, &str)>> = HashMap::new();
    let mut singles: Vec<(usize, SignalGroup)> = Vec::new();
    let mut bracket_bases = std::collections::HashSet::new();

    for (name, _) in entries {
        let p = parse_name(name);
        if let Some((_, Suffix::Bracket)) = p.index {
            bracket_bases.insert(p.base.to_owned());
        }
    }

    for (pos, (name, lit)) in entries.iter().enumerate() {
        let p = parse_name(name);
        let lit = lit.xor(p.inverted);
        match p.index {
            Some((k, suffix)) if suffix == Suffix::Bracket || !bracket_bases.contains(p.base) => {
                let key = (p.base.to_owned(), suffix);
                let list = members.entry(key.clone()).or_default();
                if list.is_empty() {
                    order.push(key);
                }
                list.push((k, lit, name.as_str()));
            }
            _ => {
                let clean = name.strip_prefix('!').unwrap_or(name);
                singles.push((pos, SignalGroup { name: clean.to_owned(), bits: vec![lit] }));
            }
        }
    }

    // (first position, group)
    let mut groups: Vec<(usize, SignalGroup)> = Vec::new();
    let first_pos = |n: &str| entries.iter().position(|(e, _)| e == n).unwrap_or(usize::MAX);
    for key in order {
        let mut list = members.remove(&key).unwrap_or_default();
        let (base, suffix) = key;
        list.sort_by_key(|&(k, _, _)| k);
        let mut bits: Vec<(usize, Lit, &str)> = Vec::with_capacity(list.len());
        for m in list {
            match bits.last() {
                Some(&(k, _, kept)) if k == m.0 => {
                    // stable sort keeps definition order, so `kept` came first
                    diags.push(GroupDiagnostic::DuplicateIndex {
                        group: base.clone(),
                        index: k,
                        kept: kept.to_owned(),
                        dropped: m.2.to_owned(),
                    });
                }
                _ => bits.push(m),
            }
        }
        let contiguous = bits.iter().enumerate().all(|(i, &(k, _, _))| i == k);
        if suffix == Suffix::Underscore && (!contiguous || bits.len() < 2) {
            for (_, lit, full) in bits {
                let clean = full.strip_prefix('!').unwrap_or(full);
                singles.push((first_pos(full), SignalGroup { name: clean.to_owned(), bits: vec![lit] }));
            }
            continue;
        }
        if !contiguous {
            diags.push(GroupDiagnostic::IndexGap { group: base.clone(), indices: bits.iter().map(|b| b.0).collect() });
        }
        let pos = bits.iter().map(|b| first_pos(b.2)).min().unwrap_or(usize::MAX);
        groups.push((pos, SignalGroup { name: base, bits: bits.into_iter().map(|b| b.1).collect() }));
    }

    let group_names: std::collections::HashSet<String> = groups.iter().map(|(_, g)| g.name.clone()).collect();
    for (pos, single) in singles {
        if group_names.contains(&single.name) {
            diags.push(GroupDiagnostic::NameClash { name: single.name.clone() });
            continue;
        }
        groups.push((pos, single));
    }
    groups.sort_by_key(|(pos, _)| *pos);
    (groups.into_iter().map(|(_, g)| g).collect(), diags)
}

/// Word-level latch groups of `netlist`.
pub fn build_groups(netlist: &Netlist) -> (Vec<SignalGroup>, Vec<GroupDiagnostic>) {
    let entries: Vec<(String, Lit)> =
        netlist.latches().iter().enumerate().map(|(i, l)| (netlist.latch_name(i), l.var.lit())).collect();
    group_signals(&entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::Var;

    fn entries(names: &[&str]) -> Vec<(String, Lit)> {
        names.iter().enumerate().map(|(i, n)| (n.to_string(), Var(i as u32 + 1).lit())).collect()
    }

    #[test]
    fn bracket_group() {
        let names: Vec<String> = (0..10).map(|k| format!("i_reg[{k}]")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let (groups, diags) = group_signals(&entries(&refs));
        assert!(diags.is_empty());
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].name, "i_reg");
        assert_eq!(groups[0].width(), 10);
    }

    #[test]
    fn fsm_group_out_of_order() {
        let (groups, _) =
            group_signals(&entries(&["ap_CS_fsm[2]", "ap_CS_fsm[0]", "ap_CS_fsm[1]", "ap_CS_fsm[4]", "ap_CS_fsm[3]"]));
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].width(), 5);
        assert_eq!(groups[0].bits[0], Var(2).lit());
        assert_eq!(groups[0].bits[4], Var(4).lit());
    }

    #[test]
    fn unrelated_names_are_singletons() {
        let (groups, diags) = group_signals(&entries(&["ap_start", "full_n", "x_1"]));
        assert!(diags.is_empty());
        let names: Vec<&str> = groups.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["ap_start", "full_n", "x_1"]);
    }

    #[test]
    fn underscore_group_and_bracket_precedence() {
        let (groups, _) = group_signals(&entries(&["cnt_0", "cnt_1", "cnt_2"]));
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].name, "cnt");
        // bracket members of the same base win; underscore member stays single
        let (groups, _) = group_signals(&entries(&["x[0]", "x[1]", "x_2"]));
        assert_eq!(groups.iter().map(|g| g.name.as_str()).collect::<Vec<_>>(), vec!["x", "x_2"]);
        assert_eq!(groups[0].width(), 2);
    }

    #[test]
    fn duplicate_index_keeps_first() {
        let (groups, diags) = group_signals(&entries(&["a[0]", "a[1]", "a[1]"]));
        assert_eq!(groups[0].bits, vec![Var(1).lit(), Var(2).lit()]);
        assert!(matches!(&diags[0], GroupDiagnostic::DuplicateIndex { index: 1, .. }));
    }

    #[test]
    fn inverted_bits() {
        let (groups, _) = group_signals(&entries(&["!fsm[0]", "fsm[1]"]));
        assert_eq!(groups[0].bits, vec![!Var(1).lit(), Var(2).lit()]);
        let (groups, _) = group_signals(&entries(&["!full_n"]));
        assert_eq!(groups[0].name, "full_n");
        assert_eq!(groups[0].bits, vec![!Var(1).lit()]);
    }

    #[test]
    fn gap_reported() {
        let (groups, diags) = group_signals(&entries(&["b[0]", "b[2]"]));
        assert_eq!(groups[0].width(), 2);
        assert!(matches!(&diags[0], GroupDiagnostic::IndexGap { .. }));
    }
}
