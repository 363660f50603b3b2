// SPDX-License-Identifier: Apache-2.0

use hlsmc::sat::{SLit, SVar, SolveResult, Solver};
use proptest::prelude::*;

type Cnf = Vec<Vec<(u32, bool)>>;

fn to_lits(c: &[(u32, bool)]) -> Vec<SLit> {
    c.iter().map(|&(v, n)| SVar(v).lit(n)).collect()
}

fn eval(cnf: &Cnf, m: u32) -> bool {
    cnf.iter().all(|c| c.iter().any(|&(v, n)| ((m >> v) & 1 == 1) != n))
}

fn brute_sat(cnf: &Cnf, nvars: u32, fixed: &[(u32, bool)]) -> bool {
    (0..1u32 << nvars).any(|m| fixed.iter().all(|&(v, n)| ((m >> v) & 1 == 1) != n) && eval(cnf, m))
}

fn cnf_strategy(max_vars: u32) -> impl Strategy<Value = (u32, Cnf)> {
    (1..=max_vars).prop_flat_map(|n| {
        let clause = prop::collection::vec((0..n, any::<bool>()), 1..=4);
        (Just(n), prop::collection::vec(clause, 0..(4 * n as usize + 4)))
    })
}

fn assumptions_strategy(n: u32) -> impl Strategy<Value = Vec<(u32, bool)>> {
    prop::collection::vec((0..n, any::<bool>()), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn agrees_with_truth_table((n, cnf) in cnf_strategy(12), seed in any::<u64>()) {
        let assumps = {
            let mut v = Vec::new();
            let mut x = seed;
            for _ in 0..(seed % 4) {
                v.push(((x % n as u64) as u32, x & 64 != 0));
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407) >> 3;
            }
            v
        };
        let mut s = Solver::new();
        for _ in 0..n { s.new_var(); }
        for c in &cnf { s.add_clause(&to_lits(c)); }
        let al = to_lits(&assumps);
        let expected = brute_sat(&cnf, n, &assumps);
        match s.solve(&al) {
            SolveResult::Sat => {
                prop_assert!(expected);
                let m = (0..n).fold(0u32, |acc, v| acc | ((s.model_value(SVar(v).pos()) as u32) << v));
                prop_assert!(eval(&cnf, m));
                for &(v, neg) in &assumps {
                    prop_assert_eq!(s.model_value(SVar(v).pos()), !neg);
                }
            }
            SolveResult::Unsat(failed) => {
                prop_assert!(!expected);
                // failed subset of assumptions and sufficient on its own
                for l in &failed { prop_assert!(al.contains(l)); }
                let fixed: Vec<(u32, bool)> = failed.iter().map(|l| (l.var().0, l.is_neg())).collect();
                prop_assert!(!brute_sat(&cnf, n, &fixed));
            }
            SolveResult::Unknown => prop_assert!(false, "no budget was set"),
        }
    }

    #[test]
    fn incremental_queries_agree((n, cnf) in cnf_strategy(10), queries in prop::collection::vec(assumptions_strategy(10), 1..6)) {
        let mut s = Solver::new();
        for _ in 0..n { s.new_var(); }
        let mut added: Cnf = Vec::new();
        for (i, c) in cnf.iter().enumerate() {
            s.add_clause(&to_lits(c));
            added.push(c.clone());
            if i % 3 == 0 {
                let q: Vec<(u32, bool)> = queries[i % queries.len()].iter().map(|&(v, b)| (v % n, b)).collect();
                let r = s.solve(&to_lits(&q));
                prop_assert_eq!(r.is_sat(), brute_sat(&added, n, &q));
            }
        }
    }

    #[test]
    fn retraction_matches_oracle((n, cnf) in cnf_strategy(10), extra in prop::collection::vec(prop::collection::vec((0u32..10, any::<bool>()), 1..4), 1..6), mask in any::<u8>()) {
        let mut s = Solver::new();
        for _ in 0..n { s.new_var(); }
        for c in &cnf { s.add_clause(&to_lits(c)); }
        let extra: Cnf = extra.into_iter().map(|c| c.into_iter().map(|(v, b)| (v % n, b)).collect()).collect();
        let acts: Vec<_> = extra.iter().map(|c| s.add_retractable(&to_lits(c))).collect();
        let mut all = cnf.clone();
        all.extend(extra.iter().cloned());
        prop_assert_eq!(s.solve(&[]).is_sat(), brute_sat(&all, n, &[]));
        let mut live = cnf.clone();
        for (i, (c, a)) in extra.iter().zip(acts).enumerate() {
            if mask >> i & 1 == 1 { s.retract(a); } else { live.push(c.clone()); }
        }
        prop_assert_eq!(s.solve(&[]).is_sat(), brute_sat(&live, n, &[]));
    }
}

#[test]
fn sixteen_var_random_instances() {
    // fixed pseudo-random 3-SAT near the threshold, checked exhaustively
    let mut x: u64 = 0x9e3779b97f4a7c15;
    let mut next = || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x
    };
    for _ in 0..20 {
        let n = 16;
        let cnf: Cnf =
            (0..68).map(|_| (0..3).map(|_| ((next() % n as u64) as u32, next() & 1 == 1)).collect()).collect();
        let mut s = Solver::new();
        for c in &cnf {
            s.add_clause(&to_lits(c));
        }
        assert_eq!(s.solve(&[]).is_sat(), brute_sat(&cnf, n, &[]));
    }
}
