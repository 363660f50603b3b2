// SPDX-License-Identifier: Apache-2.0

//! Netlist builders for the HLS-shaped families. Each returns the netlist
//! (target at output 0) and its golden manifest.

use crate::helpers::{FifoEntry, Flag, FsmEntry, FunctionEntry, LoopEntry, Manifest, Order, PipelineEntry};
use crate::netlist::{Lit, Netlist};

pub(crate) fn bit_len(v: u64) -> usize {
    (64 - v.leading_zeros() as usize).max(1)
}

fn reg(n: &mut Netlist, name: &str, width: usize) -> Vec<Lit> {
    (0..width).map(|k| n.add_latch(Some(&format!("{name}[{k}]")))).collect()
}

fn set_all(n: &mut Netlist, regs: &[Lit], next: &[Lit]) {
    for (r, &x) in regs.iter().zip(next) {
        n.set_next(r.var(), x);
    }
}

fn inc(n: &mut Netlist, bits: &[Lit]) -> Vec<Lit> {
    let mut carry = Lit::TRUE;
    bits.iter()
        .map(|&b| {
            let s = n.xor(b, carry);
            carry = n.and(b, carry);
            s
        })
        .collect()
}

fn dec(n: &mut Netlist, bits: &[Lit]) -> Vec<Lit> {
    let mut borrow = Lit::TRUE;
    bits.iter()
        .map(|&b| {
            let s = n.xor(b, borrow);
            borrow = n.and(!b, borrow);
            s
        })
        .collect()
}

fn eq_const(n: &mut Netlist, bits: &[Lit], c: u64) -> Lit {
    let eqs: Vec<Lit> = bits.iter().enumerate().map(|(i, &b)| b.xor(c >> i & 1 == 0)).collect();
    n.and_all(eqs)
}

fn mux_vec(n: &mut Netlist, sel: Lit, a: &[Lit], b: &[Lit]) -> Vec<Lit> {
    a.iter().zip(b).map(|(&x, &y)| n.mux(sel, x, y)).collect()
}

fn zeros(w: usize) -> Vec<Lit> {
    vec![Lit::FALSE; w]
}

/// One-hot state register `ap_CS_fsm`; state 0 is the reset state, stored
/// inverted.
struct Fsm {
    latches: Vec<Lit>,
    /// State bit values.
    s: Vec<Lit>,
}

impl Fsm {
    fn new(n: &mut Netlist, states: usize) -> Fsm {
        let latches: Vec<Lit> = (0..states)
            .map(|k| {
                let name = if k == 0 { "!ap_CS_fsm[0]".to_string() } else { format!("ap_CS_fsm[{k}]") };
                n.add_latch(Some(&name))
            })
            .collect();
        let s = latches.iter().enumerate().map(|(k, &l)| if k == 0 { !l } else { l }).collect();
        Fsm { latches, s }
    }

    fn set(&self, n: &mut Netlist, k: usize, next: Lit) {
        n.set_next(self.latches[k].var(), if k == 0 { !next } else { next });
    }
}

fn top_function() -> FunctionEntry {
    FunctionEntry {
        name: "top".into(),
        start: "ap_start".into(),
        done: "ap_done".into(),
        idle: "ap_idle".into(),
        ready: "ap_ready".into(),
    }
}

fn fsm_entry() -> FsmEntry {
    FsmEntry { group: "ap_CS_fsm".into(), encoding: Default::default() }
}

/// Idle → loop while `i_reg != trip`, incrementing → done → idle. The
/// target `ap_done_bad` copies `ap_done`, first raised at depth trip + 2. A
/// 4-bit `sum_reg` accumulates outside the target's fan-in.
pub fn bounded_counter(trip: u64, width: usize) -> (Netlist, Manifest) {
    let mut n = Netlist::new();
    n.add_comment(&format!("bounded counter, trip count {trip}, {width}-bit loop variable"));
    let ap_start = n.add_input(Some("ap_start"));
    let fsm = Fsm::new(&mut n, 3);
    let w = width;
    let i = reg(&mut n, "i_reg", w);
    let sum = reg(&mut n, "sum_reg", 4);
    let (s0, s1, s2) = (fsm.s[0], fsm.s[1], fsm.s[2]);

    let go = n.and(s0, ap_start);
    let at_end = eq_const(&mut n, &i, trip);
    let step = n.and(s1, !at_end);
    let leave = n.and(s1, at_end);
    let wait = n.and(s0, !ap_start);
    let n0 = n.or(wait, s2);
    let n1 = n.or(go, step);
    fsm.set(&mut n, 0, n0);
    fsm.set(&mut n, 1, n1);
    fsm.set(&mut n, 2, leave);

    let i1 = inc(&mut n, &i);
    let stepped = mux_vec(&mut n, step, &i1, &i);
    let i_next = mux_vec(&mut n, go, &zeros(w), &stepped);
    set_all(&mut n, &i, &i_next);
    let sum_i: Vec<Lit> = (0..4).map(|k| i.get(k).copied().unwrap_or(Lit::FALSE)).collect();
    let mut carry = Lit::FALSE;
    let added: Vec<Lit> = sum
        .iter()
        .zip(&sum_i)
        .map(|(&a, &b)| {
            let ab = n.xor(a, b);
            let s = n.xor(ab, carry);
            let c1 = n.and(a, b);
            let c2 = n.and(ab, carry);
            carry = n.or(c1, c2);
            s
        })
        .collect();
    let sum_next = mux_vec(&mut n, step, &added, &sum);
    set_all(&mut n, &sum, &sum_next);

    n.add_output(s2, Some("ap_done_bad"));
    n.add_output(s2, Some("ap_done"));
    n.add_output(s0, Some("ap_idle"));
    n.add_output(s2, Some("ap_ready"));

    let m = Manifest {
        fsms: vec![fsm_entry()],
        loops: vec![LoopEntry { name: "loop".into(), var: "i_reg".into(), trip_count: trip, start: 0, pipeline: None }],
        functions: vec![top_function()],
        ..Default::default()
    };
    (n, m)
}

/// FIFO of `depth` single-bit elements; `mOutPtr` counts stored elements.
/// The target `q_full_bad` is the full condition. Without pops the FIFO
/// only fills.
pub fn fifo(depth: u64, pops: bool) -> (Netlist, Manifest) {
    let mut n = Netlist::new();
    n.add_comment(&format!("fifo, depth {depth}{}", if pops { "" } else { ", pops disabled" }));
    let push = n.add_input(Some("q_push"));
    let pop = if pops { n.add_input(Some("q_pop")) } else { Lit::FALSE };
    let din = n.add_input(Some("q_din"));
    let w = bit_len(depth);
    let ptr = reg(&mut n, "q_fifo_mOutPtr", w);
    let full_l = n.add_latch(Some("!q_fifo_internal_full_n"));
    let empty_n = n.add_latch(Some("q_fifo_internal_empty_n"));
    let srl = reg(&mut n, "q_fifo_SRL", depth as usize);
    let full_n = !full_l;

    let do_push = n.and(push, full_n);
    let do_pop = n.and(pop, empty_n);
    let up = n.and(do_push, !do_pop);
    let down = n.and(do_pop, !do_push);
    let p_inc = inc(&mut n, &ptr);
    let p_dec = dec(&mut n, &ptr);
    let p_dn = mux_vec(&mut n, down, &p_dec, &ptr);
    let p_next = mux_vec(&mut n, up, &p_inc, &p_dn);
    set_all(&mut n, &ptr, &p_next);
    let will_full = eq_const(&mut n, &p_next, depth);
    let will_empty = eq_const(&mut n, &p_next, 0);
    n.set_next(full_l.var(), will_full);
    n.set_next(empty_n.var(), !will_empty);
    for k in 0..srl.len() {
        let shifted_in = if k == 0 { din } else { srl[k - 1] };
        let nx = n.mux(do_push, shifted_in, srl[k]);
        n.set_next(srl[k].var(), nx);
    }

    n.add_output(!full_n, Some("q_full_bad"));
    n.add_output(Lit::FALSE, Some(&format!("q_fifo_DEPTH_{depth}")));

    let flag = |s: &str| Flag { signal: s.into(), active_low: true };
    let m = Manifest {
        fifos: vec![FifoEntry {
            name: "q".into(),
            pointer: "q_fifo_mOutPtr".into(),
            depth,
            pointer_reset: 0,
            full: flag("q_fifo_internal_full_n"),
            empty: flag("q_fifo_internal_empty_n"),
        }],
        ..Default::default()
    };
    (n, m)
}

pub(crate) fn enable_name(pp: usize, j: usize) -> String {
    format!("ap_enable_reg_pp{pp}_iter{j}")
}

pub(crate) fn exit_name(pp: usize, j: usize) -> String {
    format!("ap_condition_pp{pp}_exit_iter{j}")
}

/// Two pipelined loops run back to back: L2 starts only after L1 has
/// drained. Each loop issues `trip` iterations into a `stages`-deep enable
/// shift register; exit registers fill behind the last issue. The target
/// `overlap_bad` (both pipelines active) is unreachable.
pub fn pipelined_loop_pair(stages: usize, trip: u64) -> (Netlist, Manifest) {
    let mut n = Netlist::new();
    n.add_comment(&format!("pipelined loop pair, {stages} stages, trip count {trip}"));
    let ap_start = n.add_input(Some("ap_start"));
    let fsm = Fsm::new(&mut n, 4);
    let w = bit_len(trip);
    let vars = [reg(&mut n, "i_reg", w), reg(&mut n, "j_reg", w)];
    let mut en = Vec::new();
    let mut ex = Vec::new();
    for pp in 0..2 {
        en.push((0..stages).map(|j| n.add_latch(Some(&enable_name(pp, j)))).collect::<Vec<_>>());
        ex.push((0..stages).map(|j| n.add_latch(Some(&exit_name(pp, j)))).collect::<Vec<_>>());
    }
    let s = fsm.s.clone();
    let go = n.and(s[0], ap_start);
    let mut leave = Vec::new();
    for pp in 0..2 {
        let active = s[pp + 1];
        let at_end = eq_const(&mut n, &vars[pp], trip);
        let issue = n.and(active, !at_end);
        let tail = n.and(active, at_end);
        let busy = n.or_all(en[pp].clone());
        leave.push(n.and(tail, !busy));
        let v1 = inc(&mut n, &vars[pp]);
        let stepped = mux_vec(&mut n, issue, &v1, &vars[pp]);
        let v_next = mux_vec(&mut n, go, &zeros(w), &stepped);
        set_all(&mut n, &vars[pp], &v_next);
        for j in 0..stages {
            let (e_in, x_in) = if j == 0 { (issue, tail) } else { (en[pp][j - 1], ex[pp][j - 1]) };
            n.set_next(en[pp][j].var(), e_in);
            n.set_next(ex[pp][j].var(), x_in);
        }
    }
    let wait = n.and(s[0], !ap_start);
    let n0 = n.or(wait, s[3]);
    let stay1 = n.and(s[1], !leave[0]);
    let n1 = n.or(go, stay1);
    let stay2 = n.and(s[2], !leave[1]);
    let n2 = n.or(leave[0], stay2);
    fsm.set(&mut n, 0, n0);
    fsm.set(&mut n, 1, n1);
    fsm.set(&mut n, 2, n2);
    fsm.set(&mut n, 3, leave[1]);

    let any1 = n.or_all(en[0].clone());
    let any2 = n.or_all(en[1].clone());
    let bad = n.and(any1, any2);
    n.add_output(bad, Some("overlap_bad"));
    n.add_output(s[3], Some("ap_done"));
    n.add_output(s[0], Some("ap_idle"));
    n.add_output(s[3], Some("ap_ready"));

    let pipes = (0..2)
        .map(|pp| PipelineEntry {
            name: format!("pp{pp}"),
            enables: (0..stages).map(|j| enable_name(pp, j)).collect(),
            exits: (0..stages).map(|j| exit_name(pp, j)).collect(),
        })
        .collect();
    let loops = ["i_reg", "j_reg"]
        .iter()
        .enumerate()
        .map(|(pp, var)| LoopEntry {
            name: format!("L{}", pp + 1),
            var: var.to_string(),
            trip_count: trip,
            start: 0,
            pipeline: Some(format!("pp{pp}")),
        })
        .collect();
    let m = Manifest {
        fsms: vec![fsm_entry()],
        pipelines: pipes,
        loops,
        loop_orders: vec![Order { earlier: "L1".into(), later: "L2".into() }],
        functions: vec![top_function()],
        ..Default::default()
    };
    (n, m)
}

/// Latency of function k (1-based).
pub(crate) fn chain_latency(k: usize) -> u64 {
    2 + (k as u64 % 2)
}

/// A top FSM calls FUNC1..FUNC<length> in sequence, waiting for each
/// done. Functions count their latency in a 2-bit register. The target
/// `order_bad` is the last function finishing before FUNC1 has finished
/// in the current run, which is unreachable.
pub fn function_chain(length: usize) -> (Netlist, Manifest) {
    let mut n = Netlist::new();
    n.add_comment(&format!("function chain of length {length}"));
    let ap_start = n.add_input(Some("ap_start"));
    // idle, (call_k, wait_k) per function, done
    let fsm = Fsm::new(&mut n, 2 * length + 2);
    let cnts: Vec<Vec<Lit>> = (1..=length).map(|k| reg(&mut n, &format!("FUNC{k}_cnt"), 2)).collect();
    let seen = n.add_latch(Some("seen_done1"));
    let s = fsm.s.clone();
    let done_state = s[2 * length + 1];
    let go = n.and(s[0], ap_start);

    let mut starts = Vec::new();
    let mut dones = Vec::new();
    let mut idles = Vec::new();
    for (k, cnt) in cnts.iter().enumerate() {
        let lat = chain_latency(k + 1);
        let idle = eq_const(&mut n, cnt, 0);
        let done = eq_const(&mut n, cnt, lat);
        let start = n.and(s[2 * k + 1], idle);
        let running = n.and(!idle, !done);
        let c1 = inc(&mut n, cnt);
        let counted = mux_vec(&mut n, running, &c1, &zeros(2));
        let one = [Lit::TRUE, Lit::FALSE];
        let c_next = mux_vec(&mut n, start, &one, &counted);
        // a finished or idle counter returns to 0 unless started
        set_all(&mut n, cnt, &c_next);
        starts.push(start);
        dones.push(done);
        idles.push(idle);
    }
    let wait = n.and(s[0], !ap_start);
    let n0 = n.or(wait, done_state);
    fsm.set(&mut n, 0, n0);
    for k in 0..length {
        let (call, wt) = (s[2 * k + 1], s[2 * k + 2]);
        let enter = if k == 0 { go } else { n.and(s[2 * k], dones[k - 1]) };
        let stay_call = n.and(call, !starts[k]);
        let nc = n.or(enter, stay_call);
        fsm.set(&mut n, 2 * k + 1, nc);
        let stay_wait = n.and(wt, !dones[k]);
        let nw = n.or(starts[k], stay_wait);
        fsm.set(&mut n, 2 * k + 2, nw);
    }
    let finish = n.and(s[2 * length], dones[length - 1]);
    fsm.set(&mut n, 2 * length + 1, finish);
    let held = n.or(seen, dones[0]);
    let seen_next = n.and(held, !go);
    n.set_next(seen.var(), seen_next);

    let bad = n.and(dones[length - 1], !seen);
    n.add_output(bad, Some("order_bad"));
    n.add_output(done_state, Some("ap_done"));
    n.add_output(s[0], Some("ap_idle"));
    n.add_output(done_state, Some("ap_ready"));
    for k in 0..length {
        let f = format!("FUNC{}", k + 1);
        n.add_output(starts[k], Some(&format!("{f}_ap_start")));
        n.add_output(dones[k], Some(&format!("{f}_ap_done")));
        n.add_output(idles[k], Some(&format!("{f}_ap_idle")));
        let ready = n.and(starts[k], idles[k]);
        n.add_output(ready, Some(&format!("{f}_ap_ready")));
    }

    let mut functions = vec![top_function()];
    functions.extend((1..=length).map(|k| {
        let f = format!("FUNC{k}");
        FunctionEntry {
            start: format!("{f}_ap_start"),
            done: format!("{f}_ap_done"),
            idle: format!("{f}_ap_idle"),
            ready: format!("{f}_ap_ready"),
            name: f,
        }
    }));
    let m = Manifest {
        fsms: vec![fsm_entry()],
        functions,
        function_orders: (1..length)
            .map(|k| Order { earlier: format!("FUNC{k}"), later: format!("FUNC{}", k + 1) })
            .collect(),
        ..Default::default()
    };
    (n, m)
}
