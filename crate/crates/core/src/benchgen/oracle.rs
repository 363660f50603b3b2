// SPDX-License-Identifier: Apache-2.0

//! Explicit-state breadth-first reachability.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::{Lit, Netlist};
use crate::pdr::{Trace, Verdict};

pub const ORACLE_MAX_LATCHES: usize = 24;
pub const ORACLE_MAX_INPUTS: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} latches exceed the oracle cap of {ORACLE_MAX_LATCHES}")]
    TooManyLatches(usize),
    #[error("{0} inputs exceed the oracle cap of {ORACLE_MAX_INPUTS}")]
    TooManyInputs(usize),
    #[error("target output {0} does not exist")]
    BadTarget(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Proof or Counterexample.
    pub verdict: Verdict,
    /// Shortest number of transitions to a state where some input raises
    /// the target.
    pub depth: Option<usize>,
    #[serde(skip)]
    pub trace: Option<Trace>,
    pub reachable_states: u64,
}

/// Bit-parallel evaluator: one `u64` lane per input combination.
struct Eval<'a> {
    netlist: &'a Netlist,
    vals: Vec<u64>,
}

const PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl<'a> Eval<'a> {
    fn lit(&self, l: Lit) -> u64 {
        self.vals[l.var().index()] ^ if l.is_negated() { !0 } else { 0 }
    }

    /// Evaluates state `state` under input combinations `chunk * 64 + lane`.
    fn run(&mut self, state: u32, chunk: u64) {
        let n = self.netlist;
        for (i, l) in n.latches().iter().enumerate() {
            self.vals[l.var.index()] = if state >> i & 1 == 1 { !0 } else { 0 };
        }
        for (j, v) in n.inputs().iter().enumerate() {
            self.vals[v.index()] = if j < 6 {
                PATTERNS[j]
            } else if chunk >> (j - 6) & 1 == 1 {
                !0
            } else {
                0
            };
        }
        for g in n.gates() {
            self.vals[g.var.index()] = self.lit(g.lhs) & self.lit(g.rhs);
        }
    }
}

fn inputs_of(combo: u64, width: usize) -> Vec<bool> {
    (0..width).map(|j| combo >> j & 1 == 1).collect()
}

/// Exact verdict and shortest counterexample depth for output `target`.
pub fn oracle(netlist: &Netlist, target: usize) -> Result<OracleResult, OracleError> {
    let nl = netlist.num_latches();
    let ni = netlist.num_inputs();
    if nl > ORACLE_MAX_LATCHES {
        return Err(OracleError::TooManyLatches(nl));
    }
    if ni > ORACLE_MAX_INPUTS {
        return Err(OracleError::TooManyInputs(ni));
    }
    let &bad = netlist.outputs().get(target).ok_or(OracleError::BadTarget(target))?;
    let lane_mask = if ni >= 6 { !0u64 } else { (1u64 << (1 << ni)) - 1 };
    let chunks = 1u64 << ni.saturating_sub(6);

    let mut eval = Eval { netlist, vals: vec![0; netlist.max_var() as usize + 1] };
    let mut visited = vec![0u64; (1usize << nl).div_ceil(64)];
    let mut parent: HashMap<u32, (u32, u64)> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut depth_of: HashMap<u32, usize> = HashMap::new();
    visited[0] |= 1;
    queue.push_back(0u32);
    depth_of.insert(0, 0);
    let mut count = 1u64;

    while let Some(s) = queue.pop_front() {
        let d = depth_of[&s];
        for ch in 0..chunks {
            eval.run(s, ch);
            let hit = eval.lit(bad) & lane_mask;
            if hit != 0 {
                let combo = ch << 6 | hit.trailing_zeros() as u64;
                let mut inputs = Vec::with_capacity(d);
                let mut cur = s;
                while let Some(&(p, c)) = parent.get(&cur) {
                    inputs.push(inputs_of(c, ni));
                    cur = p;
                }
                inputs.reverse();
                let trace = Trace { inputs, final_inputs: inputs_of(combo, ni) };
                return Ok(OracleResult {
                    verdict: Verdict::Counterexample,
                    depth: Some(d),
                    trace: Some(trace),
                    reachable_states: count,
                });
            }
            let nexts: Vec<u64> = netlist.latches().iter().map(|l| eval.lit(l.next)).collect();
            let mut lanes = lane_mask;
            while lanes != 0 {
                let lane = lanes.trailing_zeros();
                lanes &= lanes - 1;
                let t = nexts.iter().enumerate().fold(0u32, |acc, (i, w)| acc | ((w >> lane & 1) as u32) << i);
                let (w, b) = (t as usize / 64, t as usize % 64);
                if visited[w] >> b & 1 == 0 {
                    visited[w] |= 1 << b;
                    count += 1;
                    parent.insert(t, (s, ch << 6 | lane as u64));
                    depth_of.insert(t, d + 1);
                    queue.push_back(t);
                }
            }
        }
        depth_of.remove(&s);
    }
    Ok(OracleResult { verdict: Verdict::Proof, depth: None, trace: None, reachable_states: count })
}
