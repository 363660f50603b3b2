// SPDX-License-Identifier: Apache-2.0

use hlsmc::benchgen::{oracle, random_control};
use hlsmc::pdr::{check_invariant, pdr, PdrOptions, Verdict};

#[test]
fn random_machines_match_bfs() {
    let mut verdicts = [0usize; 2];
    for seed in 0..150u64 {
        let latches = 2 + (seed as usize % 15);
        let inputs = 1 + (seed as usize % 3);
        let n = random_control(latches, inputs, seed);
        let truth = oracle(&n, 0).unwrap();
        let r = pdr(&n, 0, &PdrOptions::default()).unwrap();
        assert_eq!(r.verdict, truth.verdict, "seed {seed}");
        match r.verdict {
            Verdict::Proof => {
                verdicts[0] += 1;
                check_invariant(&n, n.outputs()[0], &r.invariant).unwrap();
            }
            Verdict::Counterexample => {
                verdicts[1] += 1;
                let t = r.trace.unwrap();
                assert!(t.replays(&n, 0), "seed {seed}");
                assert!(t.depth() >= truth.depth.unwrap());
            }
            Verdict::Unknown => unreachable!(),
        }
    }
    assert!(verdicts[0] > 10 && verdicts[1] > 10, "{verdicts:?}");
}
