//! Gate-level sequential netlists in ISCAS'89 `.bench` form.
//!
//! A [`Netlist`] is immutable once built: [`Netlist::new`] checks every
//! structural invariant (single definition per net, no dangling references,
//! acyclic combinational logic, arity) and precomputes a dense net
//! numbering plus a topological gate order used by the evaluators.

mod emit;
mod eval;
mod parse;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use emit::emit_bench;
pub use eval::CombEval;
pub use parse::parse_bench;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum NetlistError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("net `{0}` is defined more than once")]
    DuplicateDefinition(String),
    #[error("net `{net}` used by `{user}` is never defined")]
    UndefinedNet { net: String, user: String },
    #[error("combinational cycle through net `{0}`")]
    CombinationalCycle(String),
    #[error("gate `{net}`: {kind} expects {expected} inputs, got {got}")]
    BadArity {
        net: String,
        kind: GateKind,
        expected: &'static str,
        got: usize,
    },
    #[error("output `{0}` is listed more than once")]
    DuplicateOutput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buff,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buff,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Nand => "NAND",
            GateKind::Or => "OR",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Not => "NOT",
            GateKind::Buff => "BUFF",
        }
    }

    /// Case-insensitive keyword lookup. `BUF` is accepted as an alias.
    pub fn from_keyword(word: &str) -> Option<Self> {
        let upper = word.to_ascii_uppercase();
        match upper.as_str() {
            "BUF" => Some(GateKind::Buff),
            _ => GateKind::ALL.into_iter().find(|k| k.keyword() == upper),
        }
    }

    pub fn is_unary(self) -> bool {
        matches!(self, GateKind::Not | GateKind::Buff)
    }

    pub fn arity_ok(self, n: usize) -> bool {
        if self.is_unary() {
            n == 1
        } else {
            n >= 2
        }
    }

    /// Evaluates the gate over 64 independent lanes at once.
    #[inline]
    pub fn eval_words(self, inputs: impl IntoIterator<Item = u64>) -> u64 {
        let mut it = inputs.into_iter();
        let first = it.next().unwrap_or(0);
        match self {
            GateKind::Buff => first,
            GateKind::Not => !first,
            GateKind::And => it.fold(first, |a, b| a & b),
            GateKind::Nand => !it.fold(first, |a, b| a & b),
            GateKind::Or => it.fold(first, |a, b| a | b),
            GateKind::Nor => !it.fold(first, |a, b| a | b),
            GateKind::Xor => it.fold(first, |a, b| a ^ b),
            GateKind::Xnor => !it.fold(first, |a, b| a ^ b),
        }
    }

    pub fn eval(self, inputs: &[bool]) -> bool {
        self.eval_words(inputs.iter().map(|&b| if b { !0 } else { 0 })) & 1 == 1
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub output: String,
    pub kind: GateKind,
    pub inputs: Vec<String>,
}

impl Gate {
    pub fn new(output: impl Into<String>, kind: GateKind, inputs: Vec<String>) -> Self {
        Gate {
            output: output.into(),
            kind,
            inputs,
        }
    }
}

/// A D flip-flop: `q = DFF(d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dff {
    pub q: String,
    pub d: String,
}

impl Dff {
    pub fn new(q: impl Into<String>, d: impl Into<String>) -> Self {
        Dff {
            q: q.into(),
            d: d.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub n_inputs: usize,
    pub n_outputs: usize,
    pub n_dffs: usize,
    pub n_gates: usize,
}

impl fmt::Display for CircuitStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}/{}",
            self.n_inputs, self.n_outputs, self.n_dffs, self.n_gates
        )
    }
}

/// Dense index of a net inside one [`Netlist`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetId(pub u32);

impl NetId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledGate {
    pub kind: GateKind,
    pub out: NetId,
    pub ins: Vec<NetId>,
}

/// Validated gate-level sequential circuit.
///
/// Net numbering: primary inputs first, then DFF outputs, then gate outputs
/// in declaration order.
#[derive(Debug, Clone)]
pub struct Netlist {
    name: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
    gates: Vec<Gate>,
    dffs: Vec<Dff>,
    net_names: Vec<String>,
    index: HashMap<String, NetId>,
    /// Gates in topological order.
    pub(crate) order: Vec<CompiledGate>,
    pub(crate) output_ids: Vec<NetId>,
    pub(crate) d_ids: Vec<NetId>,
}

impl PartialEq for Netlist {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.inputs == other.inputs
            && self.outputs == other.outputs
            && self.gates == other.gates
            && self.dffs == other.dffs
    }
}

impl Eq for Netlist {}

impl Netlist {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<String>,
        outputs: Vec<String>,
        gates: Vec<Gate>,
        dffs: Vec<Dff>,
    ) -> Result<Self, NetlistError> {
        let mut net_names = Vec::with_capacity(inputs.len() + dffs.len() + gates.len());
        let mut index = HashMap::with_capacity(net_names.capacity());
        let defined = inputs
            .iter()
            .chain(dffs.iter().map(|d| &d.q))
            .chain(gates.iter().map(|g| &g.output));
        for net in defined {
            let id = NetId(net_names.len() as u32);
            if index.insert(net.clone(), id).is_some() {
                return Err(NetlistError::DuplicateDefinition(net.clone()));
            }
            net_names.push(net.clone());
        }

        let lookup = |net: &String, user: &String| {
            index
                .get(net)
                .copied()
                .ok_or_else(|| NetlistError::UndefinedNet {
                    net: net.clone(),
                    user: user.clone(),
                })
        };

        let mut compiled = Vec::with_capacity(gates.len());
        for g in &gates {
            if !g.kind.arity_ok(g.inputs.len()) {
                return Err(NetlistError::BadArity {
                    net: g.output.clone(),
                    kind: g.kind,
                    expected: if g.kind.is_unary() {
                        "exactly 1"
                    } else {
                        "at least 2"
                    },
                    got: g.inputs.len(),
                });
            }
            let ins = g
                .inputs
                .iter()
                .map(|n| lookup(n, &g.output))
                .collect::<Result<Vec<_>, _>>()?;
            compiled.push(CompiledGate {
                kind: g.kind,
                out: index[&g.output],
                ins,
            });
        }
        let d_ids = dffs
            .iter()
            .map(|d| lookup(&d.d, &d.q))
            .collect::<Result<Vec<_>, _>>()?;
        let out_user = "OUTPUT".to_string();
        let mut seen = std::collections::HashSet::new();
        let mut output_ids = Vec::with_capacity(outputs.len());
        for o in &outputs {
            if !seen.insert(o) {
                return Err(NetlistError::DuplicateOutput(o.clone()));
            }
            output_ids.push(lookup(o, &out_user)?);
        }

        let order = topo_order(compiled, inputs.len() + dffs.len(), &net_names)?;

        Ok(Netlist {
            name: name.into(),
            inputs,
            outputs,
            gates,
            dffs,
            net_names,
            index,
            order,
            output_ids,
            d_ids,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn dffs(&self) -> &[Dff] {
        &self.dffs
    }

    pub fn stats(&self) -> CircuitStats {
        CircuitStats {
            n_inputs: self.inputs.len(),
            n_outputs: self.outputs.len(),
            n_dffs: self.dffs.len(),
            n_gates: self.gates.len(),
        }
    }

    pub fn n_nets(&self) -> usize {
        self.net_names.len()
    }

    pub fn net_id(&self, name: &str) -> Option<NetId> {
        self.index.get(name).copied()
    }

    pub fn net_name(&self, id: NetId) -> &str {
        &self.net_names[id.idx()]
    }

    pub fn input_id(&self, k: usize) -> NetId {
        NetId(k as u32)
    }

    pub fn dff_q_id(&self, k: usize) -> NetId {
        NetId((self.inputs.len() + k) as u32)
    }

    pub fn dff_d_id(&self, k: usize) -> NetId {
        self.d_ids[k]
    }

    pub fn output_id(&self, k: usize) -> NetId {
        self.output_ids[k]
    }

    /// Gate outputs that drive nothing: no gate input, DFF, or primary output.
    pub fn dangling_nets(&self) -> Vec<&str> {
        let mut used = vec![false; self.n_nets()];
        for g in &self.order {
            for i in &g.ins {
                used[i.idx()] = true;
            }
        }
        for id in self.d_ids.iter().chain(&self.output_ids) {
            used[id.idx()] = true;
        }
        self.gates
            .iter()
            .filter(|g| !used[self.index[&g.output].idx()])
            .map(|g| g.output.as_str())
            .collect()
    }

    /// Returns a copy with a different name; structure is unchanged.
    pub fn renamed(&self, name: impl Into<String>) -> Netlist {
        let mut nl = self.clone();
        nl.name = name.into();
        nl
    }
}

/// Kahn's algorithm over gates; DFF outputs and primary inputs are sources.
fn topo_order(
    gates: Vec<CompiledGate>,
    n_sources: usize,
    names: &[String],
) -> Result<Vec<CompiledGate>, NetlistError> {
    let n_nets = names.len();
    // net id -> gate position (gate outputs only)
    let mut driver = vec![usize::MAX; n_nets];
    for (k, g) in gates.iter().enumerate() {
        driver[g.out.idx()] = k;
    }
    let mut pending = vec![0usize; gates.len()];
    let mut fanout: Vec<Vec<usize>> = vec![Vec::new(); gates.len()];
    for (k, g) in gates.iter().enumerate() {
        for i in &g.ins {
            if i.idx() >= n_sources {
                pending[k] += 1;
                fanout[driver[i.idx()]].push(k);
            }
        }
    }
    let mut ready: Vec<usize> = (0..gates.len()).filter(|&k| pending[k] == 0).collect();
    ready.reverse();
    let mut order = Vec::with_capacity(gates.len());
    while let Some(k) = ready.pop() {
        order.push(k);
        for &f in fanout[k].iter().rev() {
            pending[f] -= 1;
            if pending[f] == 0 {
                ready.push(f);
            }
        }
    }
    if order.len() != gates.len() {
        let stuck = (0..gates.len()).find(|&k| pending[k] > 0).unwrap();
        return Err(NetlistError::CombinationalCycle(
            names[gates[stuck].out.idx()].clone(),
        ));
    }
    let mut slots: Vec<Option<CompiledGate>> = gates.into_iter().map(Some).collect();
    Ok(order
        .into_iter()
        .map(|k| slots[k].take().unwrap())
        .collect())
}
