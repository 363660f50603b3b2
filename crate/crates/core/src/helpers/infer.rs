// SPDX-License-Identifier: Apache-2.0

//! Best-effort manifest recovery from Vitis-style symbol names.

use std::collections::BTreeMap;

use super::expr::{reset_value, SignalClass, Signals};
use super::manifest::{FifoEntry, Flag, FsmEntry, FunctionEntry, Manifest, PipelineEntry};
use super::rules::Diagnostic;
use crate::netlist::Netlist;

/// Splits `<prefix><marker><digits><rest>` into (prefix, digits, rest).
fn split_num<'a>(name: &'a str, marker: &str) -> Option<(&'a str, usize, &'a str)> {
    let p = name.rfind(marker)?;
    let tail = &name[p + marker.len()..];
    let end = tail.find(|c: char| !c.is_ascii_digit()).unwrap_or(tail.len());
    let k = tail[..end].parse().ok()?;
    Some((&name[..p], k, &tail[end..]))
}

/// `<prefix>ap_enable_reg_pp<k>_iter<j>` → (prefix, k, j).
fn enable_reg(name: &str) -> Option<(&str, usize, usize)> {
    let (head, j, rest) = split_num(name, "_iter")?;
    if !rest.is_empty() {
        return None;
    }
    let (prefix, k, rest) = split_num(head, "ap_enable_reg_pp")?;
    rest.is_empty().then_some((prefix, k, j))
}

/// `<prefix>ap_condition_pp<k>_exit_iter<j>[_state<s>]` → (prefix, k, j).
fn exit_reg(name: &str) -> Option<(&str, usize, usize)> {
    let (head, j, rest) = split_num(name, "_exit_iter")?;
    if !rest.is_empty() && split_num(rest, "_state").is_none_or(|(p, _, r)| !p.is_empty() || !r.is_empty()) {
        return None;
    }
    let (prefix, k, rest) = split_num(head, "ap_condition_pp")?;
    rest.is_empty().then_some((prefix, k, j))
}

fn all_symbols(netlist: &Netlist) -> Vec<String> {
    let mut v: Vec<String> = (0..netlist.num_latches()).map(|i| netlist.latch_name(i)).collect();
    v.extend((0..netlist.num_inputs()).map(|i| netlist.input_name(i)));
    v.extend((0..netlist.outputs().len()).map(|i| netlist.output_name(i)));
    v.extend(netlist.comments().iter().flat_map(|c| c.split_whitespace().map(str::to_owned)));
    v
}

fn ordered(mut v: Vec<(usize, String)>, what: &str, diags: &mut Vec<Diagnostic>) -> Vec<String> {
    v.sort();
    if v.iter().enumerate().any(|(i, (j, _))| i != *j) {
        let idx: Vec<usize> = v.iter().map(|p| p.0).collect();
        diags.push(Diagnostic { entry: what.to_owned(), message: format!("stage indices {idx:?} are not 0..n") });
    }
    v.into_iter().map(|p| p.1).collect()
}

/// Manifest entries recognizable from naming conventions. Orders are never
/// inferred.
pub fn infer_manifest(netlist: &Netlist) -> (Manifest, Vec<Diagnostic>) {
    let signals = Signals::new(netlist);
    let mut m = Manifest::default();
    let mut diags = Vec::new();
    let names: Vec<&String> = signals.names().iter().collect();
    let width = |n: &str| signals.get(n).map_or(0, |b| b.len());

    for n in &names {
        if n.ends_with("ap_CS_fsm") && signals.class(n) == Some(SignalClass::Latch) {
            if width(n) >= 2 {
                m.fsms.push(FsmEntry { group: (*n).clone(), encoding: Default::default() });
            } else {
                diags.push(Diagnostic { entry: format!("fsms/{n}"), message: "single-bit state register".into() });
            }
        }
    }

    // (prefix, k) → ([(j, enable)], [(j, exit)])
    type Stages = (Vec<(usize, String)>, Vec<(usize, String)>);
    let mut pipes: BTreeMap<(String, usize), Stages> = BTreeMap::new();
    for n in &names {
        if width(n) != 1 {
            continue;
        }
        if let Some((prefix, k, j)) = enable_reg(n) {
            pipes.entry((prefix.to_owned(), k)).or_default().0.push((j, (*n).clone()));
        } else if let Some((prefix, k, j)) = exit_reg(n) {
            pipes.entry((prefix.to_owned(), k)).or_default().1.push((j, (*n).clone()));
        }
    }
    for ((prefix, k), (en, ex)) in pipes {
        let name = format!("{prefix}pp{k}");
        if en.is_empty() {
            diags.push(Diagnostic {
                entry: format!("pipelines/{name}"),
                message: "exit registers without enables".into(),
            });
            continue;
        }
        let enables = ordered(en, &format!("pipelines/{name}"), &mut diags);
        let exits = ordered(ex, &format!("pipelines/{name}"), &mut diags);
        m.pipelines.push(PipelineEntry { name, enables, exits });
    }

    let symbols = all_symbols(netlist);
    let mut bases: Vec<String> = Vec::new();
    for n in &names {
        for role in ["_fifo_mOutPtr", "_fifo_internal_full_n", "_fifo_internal_empty_n"] {
            if let Some(b) = n.strip_suffix(role) {
                if !bases.iter().any(|x| x == b) {
                    bases.push(b.to_owned());
                }
            }
        }
    }
    for base in bases {
        let entry = format!("fifos/{base}");
        let ptr = format!("{base}_fifo_mOutPtr");
        let full = format!("{base}_fifo_internal_full_n");
        let empty = format!("{base}_fifo_internal_empty_n");
        let missing: Vec<&str> =
            [&ptr, &full, &empty].into_iter().filter(|s| signals.get(s).is_none()).map(String::as_str).collect();
        if !missing.is_empty() {
            diags.push(Diagnostic { entry, message: format!("missing {}", missing.join(", ")) });
            continue;
        }
        if width(&full) != 1 || width(&empty) != 1 {
            diags.push(Diagnostic { entry, message: "status flags are not single bits".into() });
            continue;
        }
        let tag = format!("{base}_fifo_DEPTH_");
        let depth = symbols.iter().find_map(|s| s.strip_prefix(&tag).and_then(|d| d.parse::<u64>().ok()));
        let Some(depth) = depth else {
            diags.push(Diagnostic { entry, message: format!("no `{tag}<d>` annotation") });
            continue;
        };
        let pointer_reset = signals
            .get(&ptr)
            .unwrap()
            .iter()
            .enumerate()
            .take(64)
            .fold(0u64, |acc, (i, &l)| acc | (reset_value(netlist, l) as u64) << i);
        m.fifos.push(FifoEntry {
            name: base,
            pointer: ptr,
            depth,
            pointer_reset,
            full: Flag { signal: full, active_low: true },
            empty: Flag { signal: empty, active_low: true },
        });
    }

    // prefix → [start, done, idle, ready]
    let roles = ["ap_start", "ap_done", "ap_idle", "ap_ready"];
    let mut blocks: Vec<(String, [Option<String>; 4])> = Vec::new();
    for n in &names {
        if width(n) != 1 {
            continue;
        }
        for (r, role) in roles.iter().enumerate() {
            if let Some(prefix) = n.strip_suffix(role) {
                let pos = match blocks.iter().position(|(p, _)| p == prefix) {
                    Some(p) => p,
                    None => {
                        blocks.push((prefix.to_owned(), Default::default()));
                        blocks.len() - 1
                    }
                };
                blocks[pos].1[r] = Some((*n).clone());
            }
        }
    }
    for (prefix, sigs) in blocks {
        let name = match prefix.trim_end_matches('_') {
            "" => "top".to_owned(),
            p => p.to_owned(),
        };
        match sigs {
            [Some(start), Some(done), Some(idle), Some(ready)] => {
                m.functions.push(FunctionEntry { name, start, done, idle, ready })
            }
            partial => {
                let missing: Vec<&str> =
                    roles.iter().zip(&partial).filter(|(_, s)| s.is_none()).map(|(r, _)| *r).collect();
                diags.push(Diagnostic {
                    entry: format!("functions/{name}"),
                    message: format!("missing {}", missing.join(", ")),
                });
            }
        }
    }
    (m, diags)
}
