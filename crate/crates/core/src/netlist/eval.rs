use super::{NetId, Netlist};

/// Reusable evaluation buffer for one netlist. Every net carries a 64-bit
/// word so that 64 independent (input, state) assignments are evaluated per
/// pass; single-assignment callers use lane 0.
pub struct CombEval<'a> {
    nl: &'a Netlist,
    values: Vec<u64>,
}

impl<'a> CombEval<'a> {
    pub fn new(nl: &'a Netlist) -> Self {
        CombEval {
            nl,
            values: vec![0; nl.n_nets()],
        }
    }

    pub fn netlist(&self) -> &'a Netlist {
        self.nl
    }

    /// Evaluates every gate once, in topological order.
    pub fn run(&mut self, inputs: &[u64], state: &[u64]) {
        let nl = self.nl;
        assert_eq!(inputs.len(), nl.inputs().len(), "input width mismatch");
        assert_eq!(state.len(), nl.dffs().len(), "state width mismatch");
        let n_in = inputs.len();
        self.values[..n_in].copy_from_slice(inputs);
        self.values[n_in..n_in + state.len()].copy_from_slice(state);
        let values = &mut self.values;
        for g in &nl.order {
            let v = g.kind.eval_words(g.ins.iter().map(|i| values[i.idx()]));
            values[g.out.idx()] = v;
        }
    }

    #[inline]
    pub fn value(&self, id: NetId) -> u64 {
        self.values[id.idx()]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn outputs_into(&self, out: &mut Vec<u64>) {
        out.clear();
        out.extend(self.nl.output_ids.iter().map(|id| self.values[id.idx()]));
    }

    pub fn next_state_into(&self, out: &mut Vec<u64>) {
        out.clear();
        out.extend(self.nl.d_ids.iter().map(|id| self.values[id.idx()]));
    }
}

fn to_words(bits: &[bool]) -> Vec<u64> {
    bits.iter().map(|&b| u64::from(b)).collect()
}

impl Netlist {
    /// One combinational step: primary outputs and DFF next-state values for
    /// the given primary-input and DFF-output assignment.
    pub fn eval_comb(&self, inputs: &[bool], state: &[bool]) -> (Vec<bool>, Vec<bool>) {
        let mut ev = CombEval::new(self);
        ev.run(&to_words(inputs), &to_words(state));
        let outs = self.output_ids.iter().map(|id| ev.value(*id) & 1 == 1);
        let next = self.d_ids.iter().map(|id| ev.value(*id) & 1 == 1);
        (outs.collect(), next.collect())
    }

    /// Values of every net, indexed by [`NetId`].
    pub fn eval_nets(&self, inputs: &[bool], state: &[bool]) -> Vec<bool> {
        let mut ev = CombEval::new(self);
        ev.run(&to_words(inputs), &to_words(state));
        ev.values().iter().map(|v| v & 1 == 1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_bench;

    #[test]
    fn not_and_xor() {
        let nl = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)", "t").unwrap();
        assert_eq!(nl.eval_comb(&[true], &[]).0, vec![false]);
        let nl = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR(a, b)", "t").unwrap();
        assert_eq!(nl.eval_comb(&[true, true], &[]).0, vec![false]);
        assert_eq!(nl.eval_comb(&[true, false], &[]).0, vec![true]);
    }

    #[test]
    fn next_state_is_d_value() {
        let nl = parse_bench("OUTPUT(q)\nq = DFF(n)\nn = NOT(q)", "t").unwrap();
        assert_eq!(nl.eval_comb(&[], &[false]), (vec![false], vec![true]));
        assert_eq!(nl.eval_comb(&[], &[true]), (vec![true], vec![false]));
    }

    #[test]
    fn declaration_order_independent() {
        let nl = parse_bench("INPUT(a)\nOUTPUT(z)\nz = NOT(y)\ny = NOT(a)", "t").unwrap();
        assert_eq!(nl.eval_comb(&[true], &[]).0, vec![true]);
    }
}
