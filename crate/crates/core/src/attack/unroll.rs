use crate::netlist::{GateKind, NetId, Netlist};

/// Node 0 of every unrolled circuit: the reset constant 0.
pub const RESET_NODE: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnrolledGate {
    pub kind: GateKind,
    pub out: usize,
    pub ins: Vec<usize>,
}

/// Time-frame expansion of a sequential netlist into one combinational
/// circuit over numbered nodes. Frame `t`'s flip-flop outputs are the nodes
/// of frame `t-1`'s next-state nets; frame 0 reads the reset constant.
#[derive(Debug, Clone)]
pub struct UnrolledCircuit {
    base: Netlist,
    frames: usize,
    n_nodes: usize,
    gates: Vec<UnrolledGate>,
    inputs: Vec<Vec<usize>>,
    outputs: Vec<Vec<usize>>,
    states: Vec<Vec<usize>>,
    final_state: Vec<usize>,
    origin: Vec<Option<(usize, NetId)>>,
}

/// Unrolls `nl` over `frames >= 1` clock cycles from reset.
pub fn unroll(nl: &Netlist, frames: usize) -> UnrolledCircuit {
    assert!(frames >= 1, "unroll needs at least one frame");
    let n_dffs = nl.dffs().len();
    let mut origin: Vec<Option<(usize, NetId)>> = vec![None];
    let mut gates = Vec::with_capacity(frames * nl.gates().len());
    let mut inputs = Vec::with_capacity(frames);
    let mut outputs = Vec::with_capacity(frames);
    let mut states = Vec::with_capacity(frames);
    let mut state: Vec<usize> = vec![RESET_NODE; n_dffs];
    for t in 0..frames {
        let mut map = vec![usize::MAX; nl.n_nets()];
        let mut ins = Vec::with_capacity(nl.inputs().len());
        for k in 0..nl.inputs().len() {
            let id = nl.input_id(k);
            map[id.idx()] = origin.len();
            ins.push(origin.len());
            origin.push(Some((t, id)));
        }
        for (k, &node) in state.iter().enumerate() {
            map[nl.dff_q_id(k).idx()] = node;
        }
        for g in &nl.order {
            let out = origin.len();
            origin.push(Some((t, g.out)));
            map[g.out.idx()] = out;
            gates.push(UnrolledGate {
                kind: g.kind,
                out,
                ins: g.ins.iter().map(|i| map[i.idx()]).collect(),
            });
        }
        inputs.push(ins);
        outputs.push(nl.output_ids.iter().map(|o| map[o.idx()]).collect());
        states.push(state.clone());
        state = nl.d_ids.iter().map(|d| map[d.idx()]).collect();
    }
    UnrolledCircuit {
        base: nl.clone(),
        frames,
        n_nodes: origin.len(),
        gates,
        inputs,
        outputs,
        states,
        final_state: state,
        origin,
    }
}

impl UnrolledCircuit {
    pub fn base(&self) -> &Netlist {
        &self.base
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn gates(&self) -> &[UnrolledGate] {
        &self.gates
    }

    /// `inputs()[t][k]`: node of primary input `k` in frame `t`.
    pub fn inputs(&self) -> &[Vec<usize>] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Vec<usize>] {
        &self.outputs
    }

    /// Flip-flop values during frame `t`.
    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    /// Flip-flop values after the last frame.
    pub fn final_state(&self) -> &[usize] {
        &self.final_state
    }

    /// `(frame, net)` a node stands for; `None` for the reset constant.
    pub fn origin(&self, node: usize) -> Option<(usize, NetId)> {
        self.origin[node]
    }

    /// Evaluates every node for per-frame input vectors.
    pub fn eval(&self, frame_inputs: &[Vec<bool>]) -> Vec<bool> {
        assert_eq!(
            frame_inputs.len(),
            self.frames,
            "one input vector per frame"
        );
        let mut v = vec![false; self.n_nodes];
        for (nodes, vals) in self.inputs.iter().zip(frame_inputs) {
            for (&n, &b) in nodes.iter().zip(vals) {
                v[n] = b;
            }
        }
        let mut args = Vec::new();
        for g in &self.gates {
            args.clear();
            args.extend(g.ins.iter().map(|&i| v[i]));
            v[g.out] = g.kind.eval(&args);
        }
        v
    }

    /// Per-frame output vectors.
    pub fn eval_outputs(&self, frame_inputs: &[Vec<bool>]) -> Vec<Vec<bool>> {
        let v = self.eval(frame_inputs);
        self.outputs
            .iter()
            .map(|os| os.iter().map(|&o| v[o]).collect())
            .collect()
    }
}
