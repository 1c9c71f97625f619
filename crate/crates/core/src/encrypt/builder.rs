use crate::netlist::{Gate, GateKind};

/// Emits fresh, prefixed gates. Degenerate AND/OR arities collapse to a
/// wire or a constant so callers never produce illegal gates.
pub(crate) struct Builder {
    prefix: String,
    next: usize,
    pub gates: Vec<Gate>,
    anchor: String,
    k0: Option<String>,
    k1: Option<String>,
}

impl Builder {
    /// `anchor` is any defined net; constants are derived from it.
    pub fn new(prefix: &str, anchor: &str) -> Self {
        Builder {
            prefix: prefix.to_string(),
            next: 0,
            gates: Vec::new(),
            anchor: anchor.to_string(),
            k0: None,
            k1: None,
        }
    }

    pub fn name(&self, tag: &str) -> String {
        format!("{}{}", self.prefix, tag)
    }

    fn fresh(&mut self) -> String {
        let n = format!("{}g{}", self.prefix, self.next);
        self.next += 1;
        n
    }

    pub fn push(&mut self, out: String, kind: GateKind, ins: Vec<String>) -> String {
        self.gates.push(Gate::new(out.clone(), kind, ins));
        out
    }

    pub fn gate(&mut self, kind: GateKind, ins: Vec<String>) -> String {
        let out = self.fresh();
        self.push(out, kind, ins)
    }

    pub fn const0(&mut self) -> String {
        if let Some(k) = &self.k0 {
            return k.clone();
        }
        let a = self.anchor.clone();
        let k = self.gate(GateKind::Xor, vec![a.clone(), a]);
        self.k0 = Some(k.clone());
        k
    }

    pub fn const1(&mut self) -> String {
        if let Some(k) = &self.k1 {
            return k.clone();
        }
        let a = self.anchor.clone();
        let k = self.gate(GateKind::Xnor, vec![a.clone(), a]);
        self.k1 = Some(k.clone());
        k
    }

    pub fn not(&mut self, a: &str) -> String {
        self.gate(GateKind::Not, vec![a.to_string()])
    }

    pub fn and(&mut self, ins: Vec<String>) -> String {
        match ins.len() {
            0 => self.const1(),
            1 => ins.into_iter().next().unwrap(),
            _ => self.gate(GateKind::And, ins),
        }
    }

    pub fn or(&mut self, ins: Vec<String>) -> String {
        match ins.len() {
            0 => self.const0(),
            1 => ins.into_iter().next().unwrap(),
            _ => self.gate(GateKind::Or, ins),
        }
    }

    pub fn nor(&mut self, ins: Vec<String>) -> String {
        match ins.len() {
            0 => self.const1(),
            1 => self.not(&ins[0]),
            _ => self.gate(GateKind::Nor, ins),
        }
    }

    pub fn xor(&mut self, a: &str, b: &str) -> String {
        self.gate(GateKind::Xor, vec![a.to_string(), b.to_string()])
    }

    pub fn xnor(&mut self, a: &str, b: &str) -> String {
        self.gate(GateKind::Xnor, vec![a.to_string(), b.to_string()])
    }

    /// `sel ? one : zero`; `nsel` must be the complement of `sel`.
    pub fn mux(&mut self, sel: &str, nsel: &str, one: &str, zero: &str) -> String {
        let a = self.and(vec![sel.to_string(), one.to_string()]);
        let b = self.and(vec![nsel.to_string(), zero.to_string()]);
        self.or(vec![a, b])
    }

    /// Drives the named net `out` from `ins` via OR, BUFF, or a constant.
    pub fn named_or(&mut self, out: String, ins: Vec<String>) -> String {
        match ins.len() {
            0 => {
                let k = self.const0();
                self.push(out, GateKind::Buff, vec![k])
            }
            1 => self.push(out, GateKind::Buff, ins),
            _ => self.push(out, GateKind::Or, ins),
        }
    }
}
