use rand::Rng;
use serde::{Deserialize, Serialize};

use super::EncryptError;
use crate::netlist::{Gate, GateKind, Netlist};

/// One corrupted net: `net` now carries `original XOR enc_out[bit]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorSite {
    pub net: String,
    pub bit: usize,
    /// Index of the driving gate in the original netlist.
    pub gate_index: usize,
    /// New name of the uncorrupted value.
    pub pre_net: String,
}

/// Number of XOR sites for coverage `rho` on `n_gates` gates:
/// `ceil(rho * n_gates)`, clamped to `n_gates`.
pub fn site_count(rho: f64, n_gates: usize) -> usize {
    let raw = (rho * n_gates as f64 - 1e-9).ceil().max(0.0) as usize;
    if raw > n_gates {
        log::warn!("coverage {rho} asks for {raw} sites but only {n_gates} gates exist; clamping");
        n_gates
    } else {
        raw
    }
}

/// A prefix no existing net name starts with.
pub fn fresh_prefix(nl: &Netlist, base: &str) -> String {
    let taken = |p: &str| {
        nl.inputs()
            .iter()
            .chain(nl.dffs().iter().map(|d| &d.q))
            .chain(nl.gates().iter().map(|g| &g.output))
            .any(|n| n.starts_with(p))
    };
    if !taken(&format!("{base}_")) {
        return format!("{base}_");
    }
    (0..)
        .map(|k| format!("{base}{k}_"))
        .find(|p| !taken(p))
        .unwrap()
}

/// Picks `k` distinct gate outputs uniformly at random; returned in gate order.
pub(crate) fn choose_sites<R: Rng + ?Sized>(n_gates: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut picked = rand::seq::index::sample(rng, n_gates, k).into_vec();
    picked.sort_unstable();
    picked
}

/// Rewrites the gate list: each chosen gate now drives `<prefix>x<k>` and a
/// new XOR gate re-creates the original net name from it and
/// `enc_nets[bit]`, with bits assigned round-robin.
pub(crate) fn rewrite_gates(
    nl: &Netlist,
    chosen: &[usize],
    enc_nets: &[String],
    prefix: &str,
) -> (Vec<Gate>, Vec<XorSite>) {
    let mut gates = nl.gates().to_vec();
    let mut sites = Vec::with_capacity(chosen.len());
    for (k, &gi) in chosen.iter().enumerate() {
        let bit = k % enc_nets.len();
        let net = gates[gi].output.clone();
        let pre_net = format!("{prefix}x{k}");
        gates[gi].output = pre_net.clone();
        sites.push(XorSite {
            net,
            bit,
            gate_index: gi,
            pre_net,
        });
    }
    for s in &sites {
        gates.push(Gate::new(
            s.net.clone(),
            GateKind::Xor,
            vec![s.pre_net.clone(), enc_nets[s.bit].clone()],
        ));
    }
    (gates, sites)
}

/// Inserts `ceil(rho * gates)` XOR key gates. The `m` corruption bits become
/// new primary inputs named `<prefix>enc<j>`, appended after the original
/// inputs, so the result can be evaluated standalone.
pub fn insert_xor<R: Rng + ?Sized>(
    nl: &Netlist,
    m: usize,
    rho: f64,
    rng: &mut R,
) -> Result<(Netlist, Vec<XorSite>), EncryptError> {
    if nl.gates().is_empty() {
        return Err(EncryptError::NoGates);
    }
    if m == 0 {
        return Err(EncryptError::Config(
            "enc_out width must be at least 1".into(),
        ));
    }
    let prefix = fresh_prefix(nl, "lk");
    let k = site_count(rho, nl.gates().len());
    let chosen = choose_sites(nl.gates().len(), k, rng);
    let enc_nets: Vec<String> = (0..m).map(|j| format!("{prefix}enc{j}")).collect();
    let (gates, sites) = rewrite_gates(nl, &chosen, &enc_nets, &prefix);
    let mut inputs = nl.inputs().to_vec();
    inputs.extend(enc_nets);
    let out = Netlist::new(
        nl.name(),
        inputs,
        nl.outputs().to_vec(),
        gates,
        nl.dffs().to_vec(),
    )?;
    Ok((out, sites))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_round_up() {
        assert_eq!(site_count(0.2, 10), 2);
        assert_eq!(site_count(0.05, 10), 1);
        assert_eq!(site_count(0.1, 10), 1);
        assert_eq!(site_count(0.15, 10), 2);
        assert_eq!(site_count(0.05, 119), 6);
        assert_eq!(site_count(1.0, 7), 7);
        assert_eq!(site_count(1.5, 7), 7);
    }
}
