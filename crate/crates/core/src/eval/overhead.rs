use serde::Serialize;

use crate::encrypt::EncryptedDesign;
use crate::netlist::{CircuitStats, Netlist};

/// Structural cost of an encryption: gate and flip-flop deltas.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverheadReport {
    pub circuit: String,
    pub original: CircuitStats,
    pub encrypted: CircuitStats,
    pub added_gates: usize,
    pub added_dffs: usize,
    pub gate_overhead_pct: f64,
    pub dff_overhead_pct: f64,
    pub xor_sites: usize,
    /// Inserted XOR gates / original gates.
    pub coverage_achieved: f64,
}

fn pct(added: usize, base: usize) -> f64 {
    if base == 0 {
        f64::INFINITY
    } else {
        100.0 * added as f64 / base as f64
    }
}

pub fn overhead_report(orig: &Netlist, enc: &EncryptedDesign) -> OverheadReport {
    let o = orig.stats();
    let e = enc.netlist.stats();
    let added_gates = e.n_gates - o.n_gates;
    let added_dffs = e.n_dffs - o.n_dffs;
    let xor_sites = enc.report.sites.len();
    OverheadReport {
        circuit: orig.name().to_string(),
        original: o,
        encrypted: e,
        added_gates,
        added_dffs,
        gate_overhead_pct: pct(added_gates, o.n_gates),
        dff_overhead_pct: pct(added_dffs, o.n_dffs),
        xor_sites,
        coverage_achieved: xor_sites as f64 / o.n_gates as f64,
    }
}
