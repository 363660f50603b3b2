// SPDX-License-Identifier: Apache-2.0

//! Expected helper lists for the family models, written out as text.

use serde::{Deserialize, Serialize};

use super::families::{enable_name, exit_name};
use crate::helpers::Family;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenHelper {
    pub id: String,
    pub family: Family,
    pub display: String,
    /// Whether the helper holds on the model, by explicit-state search;
    /// absent when the monitored model exceeds the search caps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valid: Option<bool>,
}

fn h(id: String, family: Family, display: String) -> GoldenHelper {
    GoldenHelper { id, family, display, valid: None }
}

fn onehot(states: usize) -> GoldenHelper {
    let bits: Vec<String> = (0..states).map(|k| format!("ap_CS_fsm[{k}]")).collect();
    h("FsmOneHot:ap_CS_fsm".into(), Family::FsmOneHot, format!("exactly_one({})", bits.join(", ")))
}

pub(crate) fn bounded_counter(trip: u64) -> Vec<GoldenHelper> {
    vec![onehot(3), h("LoopBound:loop".into(), Family::LoopBound, format!("i_reg <= {trip}"))]
}

pub(crate) fn fifo(depth: u64) -> Vec<GoldenHelper> {
    let p = "q_fifo_mOutPtr";
    let (e, f) = ("q_fifo_internal_empty_n", "q_fifo_internal_full_n");
    vec![
        h("FifoPtrEmpty:q".into(), Family::FifoPtrEmpty, format!("({p} != 0) -> {e}")),
        h("FifoPtrFull:q".into(), Family::FifoPtrFull, format!("({p} != {depth}) -> {f}")),
        h("FifoPtrBound:q".into(), Family::FifoPtrBound, format!("{p} <= {depth}")),
        h("FifoMutex:q".into(), Family::FifoMutex, format!("!(!{e} & !{f})")),
    ]
}

fn window(bits: &[String]) -> String {
    let mut terms = Vec::new();
    for i in 0..bits.len() {
        for j in i + 1..bits.len() {
            for k in j + 1..bits.len() {
                terms.push(format!("!({} & !{} & {})", bits[i], bits[j], bits[k]));
            }
        }
    }
    terms.join(" & ")
}

fn flip(bits: &[String]) -> String {
    let n = bits.len();
    let changed: Vec<String> = bits.iter().map(|b| format!("{b} ^ past({b})")).collect();
    let follows = |k: usize, nb: usize| {
        let b = &bits[k];
        [format!("(({b} & !past({b})) -> {})", bits[nb]), format!("((!{b} & past({b})) -> !{})", bits[nb])]
    };
    let up: Vec<String> = (1..n).flat_map(|k| follows(k, k - 1)).collect();
    let down: Vec<String> = (0..n - 1).flat_map(|k| follows(k, k + 1)).collect();
    format!("at_most_one({}) & (({}) | ({}))", changed.join(", "), up.join(" & "), down.join(" & "))
}

pub(crate) fn pipelined_loop_pair(stages: usize, trip: u64) -> Vec<GoldenHelper> {
    let en: Vec<Vec<String>> = (0..2).map(|pp| (0..stages).map(|j| enable_name(pp, j)).collect()).collect();
    let ex: Vec<Vec<String>> = (0..2).map(|pp| (0..stages).map(|j| exit_name(pp, j)).collect()).collect();
    let mut out = vec![onehot(4)];
    for pp in 0..2 {
        if stages >= 3 {
            out.push(h(format!("PipelineWindow:pp{pp}"), Family::PipelineWindow, window(&en[pp])));
        }
        out.push(h(format!("PipelineFlip:pp{pp}:enable"), Family::PipelineFlip, flip(&en[pp])));
        out.push(h(format!("PipelineFlip:pp{pp}:exit"), Family::PipelineFlip, flip(&ex[pp])));
    }
    out.push(h("LoopBound:L1".into(), Family::LoopBound, format!("i_reg <= {trip}")));
    out.push(h("LoopBound:L2".into(), Family::LoopBound, format!("j_reg <= {trip}")));
    for (kind, set) in [("enable", &en), ("exit", &ex)] {
        out.push(h(
            format!("LoopOrder:L1>L2:{kind}"),
            Family::LoopOrder,
            format!("({}) -> !({})", set[1].join(" | "), set[0].join(" | ")),
        ));
    }
    out
}

pub(crate) fn function_chain(length: usize) -> Vec<GoldenHelper> {
    let mut out = vec![onehot(2 * length + 2)];
    for k in 1..length {
        let (a, b) = (format!("FUNC{k}"), format!("FUNC{}", k + 1));
        out.push(h(
            format!("FunctionOrder:{a}>{b}"),
            Family::FunctionOrder,
            format!("sticky({b}_ap_start, {b}_ap_done) -> {a}_ap_idle"),
        ));
    }
    out
}
