//! Cycle-accurate, zero-delay simulation.
//!
//! Conventions shared by every caller:
//! * reset puts every DFF at 0 before cycle 0;
//! * in each cycle the inputs are applied, outputs are observed
//!   combinationally (Mealy style), then every DFF latches its D value.

mod export;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::encrypt::{AuthWindow, KeySchedule};
use crate::netlist::{CombEval, Netlist};

pub use export::{write_columnar, write_vcd};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SimError {
    #[error("stimulus has {have} cycles, {need} requested")]
    StimulusTooShort { have: usize, need: usize },
    #[error("input vector at cycle {cycle} has width {got}, netlist expects {want}")]
    InputWidth {
        cycle: usize,
        got: usize,
        want: usize,
    },
    #[error("workload exhausted after {0} vectors")]
    WorkloadTooShort(usize),
    #[error("key schedule width {schedule} does not match netlist input width {netlist}")]
    ScheduleMismatch { schedule: usize, netlist: usize },
    #[error("traces have different output widths ({0} vs {1})")]
    WidthMismatch(usize, usize),
    #[error("cycle mask is empty")]
    EmptyMask,
    #[error("mask cycle {0} lies outside a trace")]
    MaskOutOfRange(usize),
}

/// What a stimulus cycle is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Annotation {
    /// A key pattern: `step` of the sequence for `chain`.
    Auth { chain: usize, step: usize },
    /// Workload vector number `idx`.
    Workload(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Stimulus {
    pub vectors: Vec<Bits>,
    pub annotations: Vec<Annotation>,
}

impl Stimulus {
    /// Every cycle is a workload cycle.
    pub fn workload_only(vectors: Vec<Bits>) -> Self {
        let annotations = (0..vectors.len()).map(Annotation::Workload).collect();
        Stimulus {
            vectors,
            annotations,
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn push(&mut self, v: Bits, a: Annotation) {
        self.vectors.push(v);
        self.annotations.push(a);
    }

    /// Cycles annotated as workload.
    pub fn workload_cycles(&self) -> Vec<usize> {
        self.annotations
            .iter()
            .enumerate()
            .filter(|(_, a)| matches!(a, Annotation::Workload(_)))
            .map(|(t, _)| t)
            .collect()
    }

    /// Workload index consumed at `cycle`, if any.
    pub fn workload_index(&self, cycle: usize) -> Option<usize> {
        match self.annotations.get(cycle) {
            Some(Annotation::Workload(i)) => Some(*i),
            _ => None,
        }
    }
}

/// One simulated cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleRecord {
    pub inputs: Bits,
    pub outputs: Bits,
    /// DFF values during the cycle (before the clock edge).
    pub state: Bits,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub cycles: Vec<CycleRecord>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn output_width(&self) -> usize {
        self.cycles.first().map_or(0, |c| c.outputs.width())
    }
}

pub fn simulate(nl: &Netlist, stim: &Stimulus, cycles: usize) -> Result<Trace, SimError> {
    if stim.len() < cycles {
        return Err(SimError::StimulusTooShort {
            have: stim.len(),
            need: cycles,
        });
    }
    let want = nl.inputs().len();
    let mut ev = CombEval::new(nl);
    let mut state = vec![0u64; nl.dffs().len()];
    let mut inputs = Vec::with_capacity(want);
    let mut outs = Vec::new();
    let mut trace = Trace {
        cycles: Vec::with_capacity(cycles),
    };
    for (t, v) in stim.vectors.iter().take(cycles).enumerate() {
        if v.width() != want {
            return Err(SimError::InputWidth {
                cycle: t,
                got: v.width(),
                want,
            });
        }
        inputs.clear();
        inputs.extend(v.as_slice().iter().map(|&b| u64::from(b)));
        ev.run(&inputs, &state);
        ev.outputs_into(&mut outs);
        let bits = |w: &[u64]| Bits::from_bools(w.iter().map(|x| x & 1 == 1).collect());
        trace.cycles.push(CycleRecord {
            inputs: v.clone(),
            outputs: bits(&outs),
            state: bits(&state),
        });
        ev.next_state_into(&mut state);
    }
    Ok(trace)
}

/// Lane-parallel simulation: `inputs[t][k]` holds input `k` at cycle `t`
/// for 64 independent runs (one per bit). Returns `outputs[t][o]` likewise.
pub fn simulate_lanes(nl: &Netlist, inputs: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut ev = CombEval::new(nl);
    let mut state = vec![0u64; nl.dffs().len()];
    let mut out = Vec::with_capacity(inputs.len());
    let mut buf = Vec::new();
    for v in inputs {
        ev.run(v, &state);
        ev.outputs_into(&mut buf);
        out.push(buf.clone());
        ev.next_state_into(&mut state);
    }
    out
}

/// Builds a stimulus that authenticates in each of `windows` and fills the
/// remaining cycles with consecutive workload vectors.
pub fn stimulus_from_windows(
    sched: &KeySchedule,
    windows: &[AuthWindow],
    workload: &[Bits],
    cycles: usize,
) -> Result<Stimulus, SimError> {
    let mut stim = Stimulus::default();
    let mut next_workload = 0usize;
    let mut win = windows.iter().peekable();
    let mut t = 0usize;
    while t < cycles {
        if let Some(w) = win.peek() {
            if w.start == t {
                let w = win.next().unwrap();
                for step in 0..sched.c {
                    if t >= cycles {
                        break;
                    }
                    stim.push(
                        sched.key(w.chain, step).clone(),
                        Annotation::Auth {
                            chain: w.chain,
                            step,
                        },
                    );
                    t += 1;
                }
                continue;
            }
        }
        let v = workload
            .get(next_workload)
            .ok_or(SimError::WorkloadTooShort(workload.len()))?;
        stim.push(v.clone(), Annotation::Workload(next_workload));
        next_workload += 1;
        t += 1;
    }
    Ok(stim)
}

/// The key manager of a trusted user: replays the back-jumping controller
/// offline and applies each key sequence exactly when it is due.
pub fn trusted_user_stimulus(
    sched: &KeySchedule,
    workload: &[Bits],
    cycles: usize,
) -> Result<Stimulus, SimError> {
    if let Some(v) = workload.first() {
        if v.width() != sched.i {
            return Err(SimError::ScheduleMismatch {
                schedule: sched.i,
                netlist: v.width(),
            });
        }
    }
    let windows = sched.windows(cycles);
    stimulus_from_windows(sched, &windows, workload, cycles)
}

/// Checks that a schedule fits a netlist's input width.
pub fn check_schedule(sched: &KeySchedule, nl: &Netlist) -> Result<(), SimError> {
    if sched.i != nl.inputs().len() {
        return Err(SimError::ScheduleMismatch {
            schedule: sched.i,
            netlist: nl.inputs().len(),
        });
    }
    Ok(())
}

/// Fraction of differing output bits over the masked cycles.
pub fn hamming_distance(a: &Trace, b: &Trace, mask: &[usize]) -> Result<f64, SimError> {
    if a.output_width() != b.output_width() {
        return Err(SimError::WidthMismatch(a.output_width(), b.output_width()));
    }
    if mask.is_empty() {
        return Err(SimError::EmptyMask);
    }
    let mut diff = 0usize;
    for &t in mask {
        let (x, y) = match (a.cycles.get(t), b.cycles.get(t)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(SimError::MaskOutOfRange(t)),
        };
        diff += x.outputs.hamming(&y.outputs);
    }
    Ok(diff as f64 / (a.output_width() * mask.len()) as f64)
}
