// SPDX-License-Identifier: Apache-2.0

//! Design manifest: the HLS features a design declares.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub fsms: Vec<FsmEntry>,
    #[serde(default)]
    pub fifos: Vec<FifoEntry>,
    #[serde(default)]
    pub pipelines: Vec<PipelineEntry>,
    #[serde(default)]
    pub loops: Vec<LoopEntry>,
    #[serde(default)]
    pub loop_orders: Vec<Order>,
    #[serde(default)]
    pub functions: Vec<FunctionEntry>,
    #[serde(default)]
    pub function_orders: Vec<Order>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FsmEncoding {
    #[default]
    Onehot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FsmEntry {
    pub group: String,
    #[serde(default)]
    pub encoding: FsmEncoding,
}

/// A status flag and its polarity. `active_low` means the signal is 0 when
/// the condition (full / empty) holds, as in `full_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flag {
    pub signal: String,
    #[serde(default)]
    pub active_low: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FifoEntry {
    pub name: String,
    pub pointer: String,
    pub depth: u64,
    #[serde(default)]
    pub pointer_reset: u64,
    pub full: Flag,
    pub empty: Flag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineEntry {
    pub name: String,
    /// Stage enable registers, first stage first.
    pub enables: Vec<String>,
    /// Exit-condition registers, first stage first.
    #[serde(default)]
    pub exits: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopEntry {
    pub name: String,
    /// Loop-variable register group.
    pub var: String,
    pub trip_count: u64,
    /// First value of the loop variable.
    #[serde(default)]
    pub start: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionEntry {
    pub name: String,
    pub start: String,
    pub done: String,
    pub idle: String,
    pub ready: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Order {
    pub earlier: String,
    pub later: String,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Manifest, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn is_empty(&self) -> bool {
        *self == Manifest::default()
    }
}

/// Names that take part in a cycle of `orders`, if any.
pub fn order_cycle(orders: &[Order]) -> Option<Vec<String>> {
    use std::collections::BTreeMap;
    let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for o in orders {
        succ.entry(&o.earlier).or_default().push(&o.later);
        succ.entry(&o.later).or_default();
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: BTreeMap<&str, u8> = succ.keys().map(|&k| (k, 0)).collect();
    fn dfs<'a>(
        v: &'a str,
        succ: &BTreeMap<&'a str, Vec<&'a str>>,
        state: &mut BTreeMap<&'a str, u8>,
        path: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        state.insert(v, 1);
        path.push(v);
        for &w in &succ[v] {
            match state[w] {
                1 => {
                    let start = path.iter().position(|&p| p == w).unwrap();
                    return Some(path[start..].iter().map(|s| s.to_string()).collect());
                }
                0 => {
                    if let Some(c) = dfs(w, succ, state, path) {
                        return Some(c);
                    }
                }
                _ => {}
            }
        }
        path.pop();
        state.insert(v, 2);
        None
    }
    let keys: Vec<&str> = succ.keys().copied().collect();
    for k in keys {
        if state[k] == 0 {
            if let Some(c) = dfs(k, &succ, &mut state, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}
