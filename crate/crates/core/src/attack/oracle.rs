use std::sync::atomic::{AtomicU64, Ordering};

use super::AttackError;
use crate::bits::Bits;
use crate::netlist::Netlist;
use crate::sim::{simulate, Stimulus};

/// A working chip: answers input sequences with output sequences, always
/// starting from reset. No internal state is exposed.
#[derive(Debug)]
pub struct Oracle {
    netlist: Netlist,
    queries: AtomicU64,
}

impl Oracle {
    pub fn new(netlist: Netlist) -> Self {
        Oracle {
            netlist,
            queries: AtomicU64::new(0),
        }
    }

    pub fn input_width(&self) -> usize {
        self.netlist.inputs().len()
    }

    pub fn output_width(&self) -> usize {
        self.netlist.outputs().len()
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn query(&self, inputs: &[Bits]) -> Result<Vec<Bits>, AttackError> {
        if let Some(v) = inputs.iter().find(|v| v.width() != self.input_width()) {
            return Err(AttackError::OracleWidth {
                oracle: self.input_width(),
                got: v.width(),
            });
        }
        self.queries.fetch_add(1, Ordering::Relaxed);
        let stim = Stimulus::workload_only(inputs.to_vec());
        let tr = simulate(&self.netlist, &stim, inputs.len()).expect("widths checked");
        Ok(tr.cycles.into_iter().map(|c| c.outputs).collect())
    }
}
