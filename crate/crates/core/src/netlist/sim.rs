// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use super::{Lit, Netlist};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("step {step}: expected {expected} input values, got {got}")]
    Arity { step: usize, expected: usize, got: usize },
}

/// One simulated cycle: the latch state and the output values under that
/// cycle's inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimStep {
    pub latches: Vec<bool>,
    pub outputs: Vec<bool>,
}

impl SimStep {
    /// Latch state as an integer, latch 0 in bit 0.
    pub fn state_bits(&self) -> u64 {
        self.latches.iter().enumerate().fold(0, |acc, (i, &b)| acc | ((b as u64) << i))
    }
}

impl Netlist {
    /// Evaluates every node for one latch/input assignment. Index by
    /// variable.
    pub fn eval_nodes(&self, latches: &[bool], inputs: &[bool]) -> Vec<bool> {
        let mut val = vec![false; self.max_var as usize + 1];
        for (i, v) in self.inputs.iter().enumerate() {
            val[v.index()] = inputs[i];
        }
        for (i, l) in self.latches.iter().enumerate() {
            val[l.var.index()] = latches[i];
        }
        for g in &self.gates {
            val[g.var.index()] = lit_value(&val, g.lhs) && lit_value(&val, g.rhs);
        }
        val
    }

    /// Value of `lit` under an assignment produced by [`Netlist::eval_nodes`].
    pub fn lit_value(values: &[bool], lit: Lit) -> bool {
        lit_value(values, lit)
    }

    fn check_arity(&self, step: usize, inputs: &[bool]) -> Result<(), SimError> {
        if inputs.len() != self.inputs.len() {
            return Err(SimError::Arity { step, expected: self.inputs.len(), got: inputs.len() });
        }
        Ok(())
    }

    /// Runs `trace` from the all-zero reset state.
    ///
    /// Returns `trace.len() + 1` steps: step `t < n` reports state `t` and the
    /// outputs under `trace[t]`; the final step reports the state reached
    /// after the last input, with outputs evaluated under all-zero inputs.
    pub fn simulate(&self, trace: &[Vec<bool>]) -> Result<Vec<SimStep>, SimError> {
        let zeros = vec![false; self.inputs.len()];
        self.simulate_with_final(trace, &zeros)
    }

    /// Like [`Netlist::simulate`] with explicit inputs for evaluating the
    /// outputs of the final state.
    pub fn simulate_with_final(&self, trace: &[Vec<bool>], final_inputs: &[bool]) -> Result<Vec<SimStep>, SimError> {
        for (t, inp) in trace.iter().enumerate() {
            self.check_arity(t, inp)?;
        }
        self.check_arity(trace.len(), final_inputs)?;
        let mut state = vec![false; self.latches.len()];
        let mut steps = Vec::with_capacity(trace.len() + 1);
        for inp in trace.iter().map(Vec::as_slice).chain(std::iter::once(final_inputs)) {
            let val = self.eval_nodes(&state, inp);
            steps.push(SimStep {
                latches: state.clone(),
                outputs: self.outputs.iter().map(|&o| lit_value(&val, o)).collect(),
            });
            state = self.latches.iter().map(|l| lit_value(&val, l.next)).collect();
        }
        Ok(steps)
    }

    /// Successor latch state of `latches` under `inputs`.
    pub fn step(&self, latches: &[bool], inputs: &[bool]) -> Vec<bool> {
        let val = self.eval_nodes(latches, inputs);
        self.latches.iter().map(|l| lit_value(&val, l.next)).collect()
    }
}

fn lit_value(values: &[bool], lit: Lit) -> bool {
    values[lit.var().index()] ^ lit.is_negated()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 3-bit free-running counter with output `value == 7`.
    fn counter3() -> Netlist {
        let mut n = Netlist::new();
        let bits: Vec<Lit> = (0..3).map(|k| n.add_latch(Some(&format!("value[{k}]")))).collect();
        let mut carry = Lit::TRUE;
        for &b in &bits {
            let next = n.xor(b, carry);
            carry = n.and(b, carry);
            n.set_next(b.var(), next);
        }
        let all = n.and_all(bits.iter().copied());
        n.add_output(all, Some("value_eq_7"));
        n
    }

    #[test]
    fn counter_counts() {
        let n = counter3();
        let steps = n.simulate(&vec![vec![]; 7]).unwrap();
        let states: Vec<u64> = steps.iter().map(SimStep::state_bits).collect();
        assert_eq!(states, (0..=7).collect::<Vec<_>>());
        assert!(steps[7].outputs[0]);
        assert!(steps[..7].iter().all(|s| !s.outputs[0]));
    }

    #[test]
    fn empty_trace_is_init() {
        let n = counter3();
        let steps = n.simulate(&[]).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].latches, vec![false; 3]);
        assert_eq!(steps[0].outputs, vec![false]);
    }

    #[test]
    fn arity_mismatch() {
        let mut n = Netlist::new();
        let a = n.add_input(None);
        n.add_output(a, None);
        assert_eq!(n.simulate(&[vec![true], vec![]]).unwrap_err(), SimError::Arity { step: 1, expected: 1, got: 0 });
    }

    #[test]
    fn final_inputs_drive_last_outputs() {
        let mut n = Netlist::new();
        let a = n.add_input(None);
        n.add_output(a, None);
        let steps = n.simulate_with_final(&[vec![false]], &[true]).unwrap();
        assert_eq!(steps[0].outputs, vec![false]);
        assert_eq!(steps[1].outputs, vec![true]);
    }
}
