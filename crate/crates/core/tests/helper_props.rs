// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hlsmc::benchgen::{gen, BenchSpec};
use hlsmc::helpers::{compile_helper, generate_helpers, interpret, Helper, Signals};
use hlsmc::netlist::Netlist;

fn family_models() -> Vec<(String, Netlist, Vec<Helper>)> {
    BenchSpec::family_sizes()
        .iter()
        .filter(|s| !matches!(s, BenchSpec::RandomControl { .. }))
        .map(|s| {
            let b = gen(s).unwrap();
            let helpers = generate_helpers(&b.netlist, &b.manifest).helpers;
            (b.name, b.netlist, helpers)
        })
        .collect()
}

fn random_trace(rng: &mut ChaCha8Rng, inputs: usize, len: usize) -> Vec<Vec<bool>> {
    (0..len).map(|_| (0..inputs).map(|_| rng.gen_bool(0.5)).collect()).collect()
}

#[test]
fn compilation_preserves_the_design() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, n, helpers) in family_models() {
        for h in &helpers {
            let c = compile_helper(&n, h).unwrap();
            assert_eq!(c.netlist.num_inputs(), n.num_inputs());
            for _ in 0..20 {
                let trace = random_trace(&mut rng, n.num_inputs(), 30);
                let a = n.simulate(&trace).unwrap();
                let b = c.netlist.simulate(&trace).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    assert_eq!(x.latches[..], y.latches[..n.num_latches()], "{name} {}", h.id);
                    assert_eq!(x.outputs[..], y.outputs[..n.outputs().len()], "{name} {}", h.id);
                }
                let expect = interpret(&n, &h.predicate, &trace).unwrap();
                for (t, (s, ok)) in b.iter().zip(&expect).enumerate() {
                    assert_eq!(s.outputs[c.monitor], !ok, "{name} {} step {t}", h.id);
                }
            }
        }
    }
}

/// A netlist holding every signal of `h` as free latches driven by inputs,
/// so any value sequence is reachable.
fn free_netlist(model: &Netlist, h: &Helper) -> (Netlist, usize) {
    let signals = Signals::new(model);
    let mut widths = BTreeMap::new();
    for s in h.predicate.signals() {
        widths.insert(s.to_owned(), signals.get(s).unwrap().len());
    }
    let mut n = Netlist::new();
    let mut bits = 0;
    for (name, w) in widths {
        for k in 0..w {
            let l = if w == 1 { n.add_latch(Some(&name)) } else { n.add_latch(Some(&format!("{name}[{k}]"))) };
            let i = n.add_input(None);
            n.set_next(l.var(), i);
            bits += 1;
        }
    }
    (n, bits)
}

fn all_traces(bits: usize, len: usize) -> impl Iterator<Item = Vec<Vec<bool>>> {
    (0u64..1 << (bits * len)).map(move |code| {
        (0..=len).map(|t| (0..bits).map(|b| t < len && code >> (t * bits + b) & 1 == 1).collect()).collect()
    })
}

#[test]
fn monitors_match_the_interpreter() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut exhaustive = 0;
    for (name, model, helpers) in family_models() {
        for h in &helpers {
            let (free, bits) = free_netlist(&model, h);
            let c = compile_helper(&free, h).unwrap();
            let len = if h.predicate.is_temporal() { 3 } else { 1 };
            let traces: Vec<Vec<Vec<bool>>> = if bits <= 10 && bits * len <= 12 {
                exhaustive += 1;
                all_traces(bits, len).collect()
            } else {
                (0..2000).map(|_| random_trace(&mut rng, bits, 6)).collect()
            };
            for trace in traces {
                let want = interpret(&free, &h.predicate, &trace).unwrap();
                let got = c.netlist.simulate(&trace).unwrap();
                for (t, (s, ok)) in got.iter().zip(&want).enumerate() {
                    assert_eq!(s.outputs[c.monitor], !ok, "{name} {} step {t} trace {trace:?}", h.id);
                }
            }
        }
    }
    assert!(exhaustive > 10, "{exhaustive}");
}
