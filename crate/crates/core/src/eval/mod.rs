//! Output-corruption experiments, closed-form models and overhead reports.
//!
//! An HD run drives the encrypted design and the original netlist with one
//! random workload stream. The original sees the workload uninterrupted; the
//! encrypted design sees it interleaved with key patterns according to the
//! case. Outputs are compared index-for-index on the workload cycles of the
//! trusted-user stimulus, so all three cases share a single cycle mask.

mod models;
mod overhead;

use std::fmt;
use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::encrypt::{EncryptConfig, EncryptedDesign, KeySchedule};
use crate::netlist::Netlist;
use crate::sim::{self, Annotation, SimError};

pub use models::{
    brute_force_effort, cycle_delay_overhead, cycle_delay_sweep, scientific, DelayPoint, DELAY_TA,
};
pub use overhead::{overhead_report, OverheadReport};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("no workload cycles within {0} cycles; the horizon is too short")]
    EmptyMask(usize),
    #[error("encrypted design has {enc} inputs, original has {orig}")]
    InputMismatch { orig: usize, enc: usize },
    #[error("encrypted design has {enc} outputs, original has {orig}")]
    OutputMismatch { orig: usize, enc: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    /// Correct key sequences whenever they are due.
    Case1,
    /// No key sequences at all.
    Case2,
    /// The first key sequence after reset, never again.
    Case3,
}

impl CaseId {
    pub const ALL: [CaseId; 3] = [CaseId::Case1, CaseId::Case2, CaseId::Case3];

    pub fn number(self) -> u8 {
        match self {
            CaseId::Case1 => 1,
            CaseId::Case2 => 2,
            CaseId::Case3 => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(CaseId::Case1),
            2 => Some(CaseId::Case2),
            3 => Some(CaseId::Case3),
            _ => None,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case{}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HdReport {
    pub circuit: String,
    pub config: EncryptConfig,
    pub case: CaseId,
    pub n_vectors: usize,
    pub cycles: usize,
    pub mask_cycles: usize,
    pub mean_hd: f64,
    pub per_run: Vec<f64>,
}

impl HdReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// The default horizon: three full back-jump periods at the worst case.
pub fn default_horizon(n: u8, c: usize) -> usize {
    c + 3 * ((1usize << n) + c)
}

/// Workload of run `run`: `len` random vectors of `width` bits. Each run has
/// its own ChaCha stream, so runs are independent of batching.
pub fn workload_for_run(seed: u64, run: usize, width: usize, len: usize) -> Vec<Bits> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    (0..len).map(|_| Bits::random(width, &mut rng)).collect()
}

/// Per-cycle annotation of the encrypted design's stimulus in `case`.
pub fn case_layout(enc: &EncryptedDesign, case: CaseId, cycles: usize) -> Vec<Annotation> {
    schedule_layout(&enc.schedule, case, cycles)
}

/// [`case_layout`] from the key schedule alone.
pub fn schedule_layout(sched: &KeySchedule, case: CaseId, cycles: usize) -> Vec<Annotation> {
    let c = sched.c;
    match case {
        CaseId::Case1 => {
            let mut out = Vec::with_capacity(cycles);
            let mut next = 0usize;
            let mut t = 0usize;
            for w in sched.windows(cycles) {
                while t < w.start.min(cycles) {
                    out.push(Annotation::Workload(next));
                    next += 1;
                    t += 1;
                }
                for step in 0..c {
                    if t >= cycles {
                        break;
                    }
                    out.push(Annotation::Auth {
                        chain: w.chain,
                        step,
                    });
                    t += 1;
                }
            }
            while t < cycles {
                out.push(Annotation::Workload(next));
                next += 1;
                t += 1;
            }
            out
        }
        CaseId::Case2 => (0..cycles).map(Annotation::Workload).collect(),
        CaseId::Case3 => (0..cycles)
            .map(|t| {
                if t < c {
                    Annotation::Auth { chain: 0, step: t }
                } else {
                    Annotation::Workload(t - c)
                }
            })
            .collect(),
    }
}

/// Builds the scalar stimulus of one run; used by the CLI and as a
/// reference for the lane-parallel path.
pub fn case_stimulus(
    enc: &EncryptedDesign,
    case: CaseId,
    workload: &[Bits],
    cycles: usize,
) -> Result<sim::Stimulus, EvalError> {
    schedule_stimulus(&enc.schedule, case, workload, cycles)
}

/// [`case_stimulus`] from the key schedule alone.
pub fn schedule_stimulus(
    sched: &KeySchedule,
    case: CaseId,
    workload: &[Bits],
    cycles: usize,
) -> Result<sim::Stimulus, EvalError> {
    let mut stim = sim::Stimulus::default();
    for a in schedule_layout(sched, case, cycles) {
        let v = match a {
            Annotation::Auth { chain, step } => sched.key(chain, step).clone(),
            Annotation::Workload(k) => workload
                .get(k)
                .cloned()
                .ok_or(SimError::WorkloadTooShort(workload.len()))?,
        };
        stim.push(v, a);
    }
    Ok(stim)
}

/// Lane-packed inputs for up to 64 runs: `words[t][k]`.
fn pack_inputs(
    layout: &[Annotation],
    sched: &KeySchedule,
    workloads: &[Vec<Bits>],
    width: usize,
) -> Vec<Vec<u64>> {
    let all = if workloads.len() == 64 {
        u64::MAX
    } else {
        (1u64 << workloads.len()) - 1
    };
    layout
        .iter()
        .map(|a| match *a {
            Annotation::Auth { chain, step } => {
                let key = sched.key(chain, step);
                (0..width).map(|k| if key[k] { all } else { 0 }).collect()
            }
            Annotation::Workload(idx) => (0..width)
                .map(|k| {
                    workloads
                        .iter()
                        .enumerate()
                        .fold(0u64, |w, (lane, wl)| w | (u64::from(wl[idx][k]) << lane))
                })
                .collect(),
        })
        .collect()
}

/// Runs `n_vectors` independent workloads through case `case`.
pub fn run_case(
    orig: &Netlist,
    enc: &EncryptedDesign,
    case: CaseId,
    n_vectors: usize,
    cycles: usize,
    seed: u64,
) -> Result<HdReport, EvalError> {
    run_case_with(
        orig,
        &enc.netlist,
        &enc.schedule,
        case,
        n_vectors,
        cycles,
        seed,
    )
}

/// [`run_case`] for an encrypted netlist loaded next to its key schedule.
pub fn run_case_with(
    orig: &Netlist,
    enc_nl: &Netlist,
    sched: &KeySchedule,
    case: CaseId,
    n_vectors: usize,
    cycles: usize,
    seed: u64,
) -> Result<HdReport, EvalError> {
    let width = orig.inputs().len();
    if enc_nl.inputs().len() != width {
        return Err(EvalError::InputMismatch {
            orig: width,
            enc: enc_nl.inputs().len(),
        });
    }
    let n_out = orig.outputs().len();
    if enc_nl.outputs().len() != n_out {
        return Err(EvalError::OutputMismatch {
            orig: n_out,
            enc: enc_nl.outputs().len(),
        });
    }
    let mask: Vec<usize> = schedule_layout(sched, CaseId::Case1, cycles)
        .iter()
        .enumerate()
        .filter(|(_, a)| matches!(a, Annotation::Workload(_)))
        .map(|(t, _)| t)
        .collect();
    if mask.is_empty() || n_out == 0 {
        return Err(EvalError::EmptyMask(cycles));
    }
    let layout = schedule_layout(sched, case, cycles);
    let batches: Vec<std::ops::Range<usize>> = (0..n_vectors)
        .step_by(64)
        .map(|s| s..(s + 64).min(n_vectors))
        .collect();
    let per_batch: Vec<Vec<f64>> = batches
        .into_par_iter()
        .map(|runs| {
            let workloads: Vec<Vec<Bits>> = runs
                .clone()
                .map(|r| workload_for_run(seed, r, width, cycles))
                .collect();
            let golden_in = pack_inputs(
                &(0..cycles).map(Annotation::Workload).collect::<Vec<_>>(),
                sched,
                &workloads,
                width,
            );
            let golden = sim::simulate_lanes(orig, &golden_in);
            let enc_in = pack_inputs(&layout, sched, &workloads, width);
            let outs = sim::simulate_lanes(enc_nl, &enc_in);
            let lanes = if runs.len() == 64 {
                u64::MAX
            } else {
                (1u64 << runs.len()) - 1
            };
            let mut diffs = vec![0usize; runs.len()];
            for &t in &mask {
                let Annotation::Workload(idx) = layout[t] else {
                    unreachable!("every case feeds workload on the shared mask")
                };
                for (e, g) in outs[t].iter().zip(&golden[idx]) {
                    let mut x = (e ^ g) & lanes;
                    while x != 0 {
                        diffs[x.trailing_zeros() as usize] += 1;
                        x &= x - 1;
                    }
                }
            }
            let total = (mask.len() * n_out) as f64;
            diffs.into_iter().map(|d| d as f64 / total).collect()
        })
        .collect();
    let per_run: Vec<f64> = per_batch.into_iter().flatten().collect();
    let mean_hd = if per_run.is_empty() {
        0.0
    } else {
        per_run.iter().sum::<f64>() / per_run.len() as f64
    };
    Ok(HdReport {
        circuit: orig.name().to_string(),
        config: sched.config.clone(),
        case,
        n_vectors,
        cycles,
        mask_cycles: mask.len(),
        mean_hd,
        per_run,
    })
}

/// CSV with one row per report: `circuit,coverage,case,n_vectors,cycles,mean_hd`.
pub fn write_hd_csv<W: Write>(w: &mut W, reports: &[HdReport]) -> io::Result<()> {
    writeln!(w, "circuit,coverage,case,n_vectors,cycles,mean_hd")?;
    for r in reports {
        writeln!(
            w,
            "{},{},{},{},{},{:.6}",
            r.circuit,
            r.config.coverage,
            r.case.number(),
            r.n_vectors,
            r.cycles,
            r.mean_hd
        )?;
    }
    Ok(())
}
