use std::fmt::Write as _;
use std::io::{self, Write};

use super::solver::{DimacsLit, Solver};
use super::unroll::{UnrolledCircuit, RESET_NODE};
use crate::netlist::GateKind;

/// Anything that accepts fresh variables and clauses.
pub trait ClauseSink {
    fn new_var(&mut self) -> DimacsLit;
    fn add_clause(&mut self, lits: &[DimacsLit]);
}

impl ClauseSink for Solver {
    fn new_var(&mut self) -> DimacsLit {
        Solver::new_var(self)
    }

    fn add_clause(&mut self, lits: &[DimacsLit]) {
        Solver::add_clause(self, lits);
    }
}

/// A clause list plus the `(frame, net)` each variable encodes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    pub n_vars: usize,
    pub clauses: Vec<Vec<DimacsLit>>,
    /// `annotations[v - 1]` for DIMACS variable `v`.
    pub annotations: Vec<Option<(usize, String)>>,
}

impl ClauseSink for Cnf {
    fn new_var(&mut self) -> DimacsLit {
        self.n_vars += 1;
        self.annotations.push(None);
        self.n_vars as DimacsLit
    }

    fn add_clause(&mut self, lits: &[DimacsLit]) {
        debug_assert!(!lits.is_empty());
        debug_assert!(lits
            .iter()
            .all(|&l| l != 0 && l.unsigned_abs() as usize <= self.n_vars));
        self.clauses.push(lits.to_vec());
    }
}

impl Cnf {
    pub fn to_dimacs(&self) -> String {
        let mut s = String::new();
        writeln!(s, "p cnf {} {}", self.n_vars, self.clauses.len()).unwrap();
        for c in &self.clauses {
            for l in c {
                write!(s, "{l} ").unwrap();
            }
            s.push_str("0\n");
        }
        s
    }

    pub fn write_dimacs<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(self.to_dimacs().as_bytes())
    }

    /// Loads every clause into a fresh solver.
    pub fn to_solver(&self) -> Solver {
        let mut s = Solver::new();
        for _ in 0..self.n_vars {
            s.new_var();
        }
        for c in &self.clauses {
            s.add_clause(c);
        }
        s
    }
}

/// Tseitin clauses for `y = kind(ins)`. Multi-input XOR/XNOR chain through
/// auxiliary variables.
pub fn encode_gate<S: ClauseSink>(s: &mut S, kind: GateKind, y: DimacsLit, ins: &[DimacsLit]) {
    match kind {
        GateKind::Buff => {
            s.add_clause(&[-y, ins[0]]);
            s.add_clause(&[y, -ins[0]]);
        }
        GateKind::Not => {
            s.add_clause(&[-y, -ins[0]]);
            s.add_clause(&[y, ins[0]]);
        }
        GateKind::And | GateKind::Nand => {
            let o = if kind == GateKind::And { y } else { -y };
            for &a in ins {
                s.add_clause(&[-o, a]);
            }
            let mut big: Vec<DimacsLit> = ins.iter().map(|&a| -a).collect();
            big.push(o);
            s.add_clause(&big);
        }
        GateKind::Or | GateKind::Nor => {
            let o = if kind == GateKind::Or { y } else { -y };
            for &a in ins {
                s.add_clause(&[o, -a]);
            }
            let mut big = ins.to_vec();
            big.push(-o);
            s.add_clause(&big);
        }
        GateKind::Xor | GateKind::Xnor => {
            let mut acc = ins[0];
            for (k, &b) in ins.iter().enumerate().skip(1) {
                let last = k + 1 == ins.len();
                let z = if last {
                    if kind == GateKind::Xor {
                        y
                    } else {
                        -y
                    }
                } else {
                    s.new_var()
                };
                s.add_clause(&[-z, acc, b]);
                s.add_clause(&[-z, -acc, -b]);
                s.add_clause(&[z, -acc, b]);
                s.add_clause(&[z, acc, -b]);
                acc = z;
            }
        }
    }
}

/// Encodes `u` into `sink`, driving frame `t`'s input `k` with literal
/// `frame_inputs[t][k]`. Returns the literal of every node. The reset
/// constant gets one variable forced false, created only when used.
pub fn encode_unrolled<S: ClauseSink>(
    sink: &mut S,
    u: &UnrolledCircuit,
    frame_inputs: &[Vec<DimacsLit>],
) -> Vec<DimacsLit> {
    let mut lit = vec![0 as DimacsLit; u.n_nodes()];
    for (nodes, lits) in u.inputs().iter().zip(frame_inputs) {
        for (&n, &l) in nodes.iter().zip(lits) {
            lit[n] = l;
        }
    }
    let uses_reset = u.gates().iter().any(|g| g.ins.contains(&RESET_NODE))
        || u.outputs().iter().flatten().any(|&n| n == RESET_NODE)
        || u.final_state().contains(&RESET_NODE);
    if uses_reset {
        let z = sink.new_var();
        sink.add_clause(&[-z]);
        lit[RESET_NODE] = z;
    }
    let mut args = Vec::new();
    for g in u.gates() {
        let y = sink.new_var();
        lit[g.out] = y;
        args.clear();
        args.extend(g.ins.iter().map(|&i| lit[i]));
        encode_gate(sink, g.kind, y, &args);
    }
    lit
}

/// Tseitin encoding with one fresh variable per input and gate node, plus
/// the assumptions `(node, value)` as unit clauses.
pub fn to_cnf(u: &UnrolledCircuit, assumptions: &[(usize, bool)]) -> (Cnf, Vec<DimacsLit>) {
    let mut cnf = Cnf::default();
    let frame_inputs: Vec<Vec<DimacsLit>> = u
        .inputs()
        .iter()
        .map(|f| f.iter().map(|_| cnf.new_var()).collect())
        .collect();
    let lits = encode_unrolled(&mut cnf, u, &frame_inputs);
    for (node, &l) in lits.iter().enumerate() {
        if node == RESET_NODE || l <= 0 {
            continue;
        }
        if let Some((t, net)) = u.origin(node) {
            cnf.annotations[l as usize - 1] = Some((t, u.base().net_name(net).to_string()));
        }
    }
    for &(node, v) in assumptions {
        let l = lits[node];
        cnf.add_clause(&[if v { l } else { -l }]);
    }
    (cnf, lits)
}
