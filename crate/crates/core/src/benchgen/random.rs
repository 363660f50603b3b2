// SPDX-License-Identifier: Apache-2.0

//! Seeded random control machines for oracle fuzzing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::netlist::{Lit, Netlist};

/// A random machine with `latches` state bits and `inputs` free inputs.
///
/// Next-state functions are small random formulas over a handful of
/// signals, biased toward holding or shifting state so that both reachable
/// and unreachable targets occur. The single output `bad` is a conjunction
/// of two to four random latch literals.
pub fn random_control(latches: usize, inputs: usize, seed: u64) -> Netlist {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n = Netlist::new();
    n.add_comment(&format!("random control: {latches} latches, {inputs} inputs, seed {seed}"));
    let ins: Vec<Lit> = (0..inputs).map(|k| n.add_input(Some(&format!("in{k}")))).collect();
    let regs: Vec<Lit> = (0..latches).map(|k| n.add_latch(Some(&format!("r[{k}]")))).collect();

    let pick = |rng: &mut ChaCha8Rng, own: usize| -> Lit {
        let l = if !ins.is_empty() && rng.gen_bool(0.25) {
            *ins.choose(rng).unwrap()
        } else if rng.gen_bool(0.5) && own > 0 {
            // neighbours keep the machines shift-like
            regs[own - 1]
        } else {
            *regs.choose(rng).unwrap()
        };
        l.xor(rng.gen_bool(0.5))
    };

    for (k, &r) in regs.iter().enumerate() {
        let a = pick(&mut rng, k);
        let b = pick(&mut rng, k);
        let c = pick(&mut rng, k);
        let next = match rng.gen_range(0..6) {
            0 => n.and(a, b),
            1 => n.or(a, b),
            2 => n.xor(a, b),
            3 => n.mux(a, b, r),
            4 => {
                let ab = n.and(a, b);
                n.or(ab, c)
            }
            _ => {
                // set/reset register
                let set = n.and(a, b);
                let hold = n.and(r, c);
                n.or(set, hold)
            }
        };
        n.set_next(r.var(), next);
    }

    let width = rng.gen_range(2..=4.min(latches.max(2)));
    let mut chosen: Vec<Lit> = regs.choose_multiple(&mut rng, width.min(latches)).copied().collect();
    for l in &mut chosen {
        *l = l.xor(rng.gen_bool(0.5));
    }
    let bad = n.and_all(chosen);
    n.add_output(bad, Some("bad"));
    n
}
