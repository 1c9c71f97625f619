//! Oracle-guided sequential SAT attack with known authentication timing.
//!
//! For window `q` the attacker unrolls the encrypted netlist from reset
//! through the end of that window plus a short probe, fixes the keys already
//! recovered in earlier windows and drives every functional cycle before the
//! window with fixed random probes. Two copies of the instance with free key
//! patterns and a shared post-window probe form a miter; each satisfying
//! probe is replayed on the oracle and both copies are pinned to the
//! observed outputs. When no distinguishing probe remains, any key pattern
//! consistent with the observations is returned.

mod cnf;
mod oracle;
mod solver;
mod unroll;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::Bits;
use crate::netlist::Netlist;
use crate::sim::{simulate_lanes, Annotation};

pub use cnf::{encode_gate, encode_unrolled, to_cnf, ClauseSink, Cnf};
pub use oracle::Oracle;
pub use solver::{solve_clauses, DimacsLit, SolveResult, Solver, SolverStats};
pub use unroll::{unroll, UnrolledCircuit, UnrolledGate, RESET_NODE};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum AttackError {
    #[error("oracle has {oracle} inputs, got a vector of width {got}")]
    OracleWidth { oracle: usize, got: usize },
    #[error("oracle and encrypted netlist disagree on {what}: {oracle} vs {enc}")]
    Interface {
        what: &'static str,
        oracle: usize,
        enc: usize,
    },
    #[error("window starts must be increasing with at least one functional cycle between windows")]
    BadTiming,
    #[error("no timing given for window {0}")]
    MissingWindow(usize),
    #[error("a key for window {0} must be given before window {1}")]
    MissingKey(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttackConfig {
    /// Upper bound on the windows attacked.
    pub max_seq: usize,
    /// Solver conflicts allowed per window; `None` is unlimited.
    pub budget: Option<u64>,
    /// Seed of the fixed functional-cycle probes.
    pub seed: u64,
    /// Longest post-window probe.
    pub max_probe: usize,
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig {
            max_seq: 7,
            budget: None,
            seed: 1,
            max_probe: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowStats {
    pub index: usize,
    pub window_start: usize,
    pub frames: usize,
    pub probe_len: usize,
    pub distinguishing_inputs: usize,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub vars: usize,
    pub clauses: usize,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum WindowOutcome {
    /// A key pattern consistent with every observation.
    Recovered(Vec<Bits>),
    /// No key pattern explains the oracle's answers.
    NoConsistentKey,
    /// The conflict budget ran out.
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowResult {
    pub outcome: WindowOutcome,
    pub stats: WindowStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackReport {
    pub keys: Vec<Vec<Bits>>,
    pub windows: Vec<WindowStats>,
    /// Why the attack stopped before `max_seq` windows, if it did.
    pub stopped: Option<String>,
    pub budget_exhausted: bool,
    pub oracle_queries: u64,
}

impl AttackReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Attacker's view of the timeline: window starts and key length.
struct Timeline<'a> {
    starts: &'a [usize],
    c: usize,
}

impl Timeline<'_> {
    fn window_of(&self, t: usize) -> Option<(usize, usize)> {
        self.starts
            .iter()
            .position(|&s| s <= t && t < s + self.c)
            .map(|j| (j, t - self.starts[j]))
    }

    /// Post-window probe length for window `q`.
    fn probe_len(&self, q: usize, max_probe: usize) -> usize {
        match self.starts.get(q + 1) {
            Some(&next) => (next - self.starts[q] - self.c).clamp(1, max_probe.max(1)),
            None => 1,
        }
    }
}

fn check_timing(starts: &[usize], c: usize) -> Result<(), AttackError> {
    if starts.windows(2).any(|w| w[1] < w[0] + c + 1) || c == 0 {
        return Err(AttackError::BadTiming);
    }
    Ok(())
}

/// Fixed attacker probe for functional cycle `t`.
fn probe_vector(seed: u64, t: usize, width: usize) -> Bits {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t as u64);
    Bits::random(width, &mut rng)
}

fn lit_of(true_lit: DimacsLit, b: bool) -> DimacsLit {
    if b {
        true_lit
    } else {
        -true_lit
    }
}

/// Input literals of one copy of the window-`q` instance.
#[allow(clippy::too_many_arguments)]
fn frame_literals(
    tl: &Timeline,
    q: usize,
    frames: usize,
    width: usize,
    keys: &[Vec<Bits>],
    key_vars: &[Vec<DimacsLit>],
    post: &dyn Fn(usize, usize) -> DimacsLit,
    true_lit: DimacsLit,
    seed: u64,
) -> Vec<Vec<DimacsLit>> {
    let post_start = tl.starts[q] + tl.c;
    (0..frames)
        .map(|t| match tl.window_of(t) {
            Some((j, step)) if j < q => (0..width)
                .map(|k| lit_of(true_lit, keys[j][step][k]))
                .collect(),
            Some((_, step)) => key_vars[step].clone(),
            None if t >= post_start => (0..width).map(|k| post(t - post_start, k)).collect(),
            None => {
                let p = probe_vector(seed, t, width);
                (0..width).map(|k| lit_of(true_lit, p[k])).collect()
            }
        })
        .collect()
}

/// Functional cycles of the instance in order (what the oracle sees).
fn functional_frames(tl: &Timeline, frames: usize) -> Vec<usize> {
    (0..frames).filter(|&t| tl.window_of(t).is_none()).collect()
}

fn model_bit(model: &[bool], l: DimacsLit) -> bool {
    model[l.unsigned_abs() as usize - 1] == (l > 0)
}

/// Attacks window `q` given the keys of windows `0..q`.
pub fn recover_window(
    enc: &Netlist,
    oracle: &Oracle,
    starts: &[usize],
    c: usize,
    q: usize,
    keys: &[Vec<Bits>],
    cfg: &AttackConfig,
) -> Result<WindowResult, AttackError> {
    check_timing(starts, c)?;
    let width = enc.inputs().len();
    if oracle.input_width() != width {
        return Err(AttackError::Interface {
            what: "input width",
            oracle: oracle.input_width(),
            enc: width,
        });
    }
    if oracle.output_width() != enc.outputs().len() {
        return Err(AttackError::Interface {
            what: "output width",
            oracle: oracle.output_width(),
            enc: enc.outputs().len(),
        });
    }
    if q >= starts.len() {
        return Err(AttackError::MissingWindow(q));
    }
    if keys.len() < q {
        return Err(AttackError::MissingKey(keys.len(), q));
    }
    let t0 = Instant::now();
    let tl = Timeline { starts, c };
    let d = tl.probe_len(q, cfg.max_probe);
    let frames = starts[q] + c + d;
    let u = unroll(enc, frames);
    let func = functional_frames(&tl, frames);
    let post_start = starts[q] + c;

    let mut s = Solver::new();
    s.set_budget(cfg.budget);
    let t = s.new_var();
    s.add_clause(&[t]);
    let new_vars = |s: &mut Solver, rows: usize| -> Vec<Vec<DimacsLit>> {
        (0..rows)
            .map(|_| (0..width).map(|_| s.new_var()).collect())
            .collect()
    };
    let ka = new_vars(&mut s, c);
    let kb = new_vars(&mut s, c);
    let x = new_vars(&mut s, d);

    let xs = x.clone();
    let post_x = move |p: usize, k: usize| xs[p][k];
    let la = encode_unrolled(
        &mut s,
        &u,
        &frame_literals(&tl, q, frames, width, keys, &ka, &post_x, t, cfg.seed),
    );
    let lb = encode_unrolled(
        &mut s,
        &u,
        &frame_literals(&tl, q, frames, width, keys, &kb, &post_x, t, cfg.seed),
    );
    let act = s.new_var();
    let mut diff = vec![-act];
    for f in post_start..frames {
        for (&oa, &ob) in u.outputs()[f].iter().zip(&u.outputs()[f]) {
            let z = s.new_var();
            encode_gate(&mut s, crate::netlist::GateKind::Xor, z, &[la[oa], lb[ob]]);
            diff.push(z);
        }
    }
    s.add_clause(&diff);

    let mut dips = 0usize;
    let outcome = loop {
        match s.solve_with(&[act]) {
            SolveResult::Unknown => break WindowOutcome::BudgetExhausted,
            SolveResult::Sat(model) => {
                dips += 1;
                let probe: Vec<Bits> = x
                    .iter()
                    .map(|row| {
                        Bits::from_bools(row.iter().map(|&l| model_bit(&model, l)).collect())
                    })
                    .collect();
                let seq: Vec<Bits> = func
                    .iter()
                    .map(|&f| {
                        if f >= post_start {
                            probe[f - post_start].clone()
                        } else {
                            probe_vector(cfg.seed, f, width)
                        }
                    })
                    .collect();
                let answer = oracle.query(&seq)?;
                let fixed = |p: usize, k: usize| lit_of(t, probe[p][k]);
                for kv in [&ka, &kb] {
                    let lits = encode_unrolled(
                        &mut s,
                        &u,
                        &frame_literals(&tl, q, frames, width, keys, kv, &fixed, t, cfg.seed),
                    );
                    for (&f, y) in func.iter().zip(&answer) {
                        for (o, &node) in u.outputs()[f].iter().enumerate() {
                            s.add_clause(&[lit_of(lits[node], y[o])]);
                        }
                    }
                }
            }
            SolveResult::Unsat => {
                break match s.solve() {
                    SolveResult::Sat(model) => WindowOutcome::Recovered(
                        ka.iter()
                            .map(|row| {
                                Bits::from_bools(
                                    row.iter().map(|&l| model_bit(&model, l)).collect(),
                                )
                            })
                            .collect(),
                    ),
                    SolveResult::Unsat => WindowOutcome::NoConsistentKey,
                    SolveResult::Unknown => WindowOutcome::BudgetExhausted,
                };
            }
        }
    };
    let st = s.stats();
    Ok(WindowResult {
        outcome,
        stats: WindowStats {
            index: q,
            window_start: starts[q],
            frames,
            probe_len: d,
            distinguishing_inputs: dips,
            conflicts: st.conflicts,
            decisions: st.decisions,
            propagations: st.propagations,
            vars: s.n_vars(),
            clauses: s.n_clauses(),
            wall_ms: t0.elapsed().as_secs_f64() * 1e3,
        },
    })
}

/// Recovers key sequences window by window, for at most `cfg.max_seq`
/// windows of `known_timing`.
pub fn recover_key_sequences(
    enc: &Netlist,
    oracle: &Oracle,
    known_timing: &[usize],
    c: usize,
    cfg: &AttackConfig,
) -> Result<AttackReport, AttackError> {
    check_timing(known_timing, c)?;
    let before = oracle.queries();
    let mut keys: Vec<Vec<Bits>> = Vec::new();
    let mut windows = Vec::new();
    let mut stopped = None;
    let mut budget_exhausted = false;
    for q in 0..cfg.max_seq.min(known_timing.len()) {
        let r = recover_window(enc, oracle, known_timing, c, q, &keys, cfg)?;
        log::info!(
            "window {q}: {} frames, {} conflicts, {} distinguishing inputs",
            r.stats.frames,
            r.stats.conflicts,
            r.stats.distinguishing_inputs
        );
        windows.push(r.stats);
        match r.outcome {
            WindowOutcome::Recovered(k) => keys.push(k),
            WindowOutcome::NoConsistentKey => {
                stopped = Some(format!("no key consistent with the oracle in window {q}"));
                break;
            }
            WindowOutcome::BudgetExhausted => {
                stopped = Some(format!("conflict budget exhausted in window {q}"));
                budget_exhausted = true;
                break;
            }
        }
    }
    Ok(AttackReport {
        keys,
        windows,
        stopped,
        budget_exhausted,
        oracle_queries: oracle.queries() - before,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Validation {
    /// Functional-cycle output vectors compared against the oracle.
    pub compared: usize,
    /// Runs with at least one differing output bit.
    pub mismatches: usize,
}

impl Validation {
    pub fn consistent(&self) -> bool {
        self.mismatches == 0
    }
}

/// Replays `keys` in their windows with random functional workloads and
/// compares the encrypted design with the oracle on every functional cycle
/// through the cycle after the last key window, over at least
/// `min_vectors` compared vectors.
pub fn validate_keys(
    enc: &Netlist,
    oracle: &Oracle,
    starts: &[usize],
    c: usize,
    keys: &[Vec<Bits>],
    min_vectors: usize,
    seed: u64,
) -> Result<Validation, AttackError> {
    check_timing(starts, c)?;
    if keys.is_empty() || keys.len() > starts.len() {
        return Err(AttackError::MissingWindow(keys.len()));
    }
    let tl = Timeline { starts, c };
    let q = keys.len() - 1;
    let frames = starts[q] + c + tl.probe_len(q, usize::MAX);
    let width = enc.inputs().len();
    let layout: Vec<Annotation> = {
        let mut next = 0;
        (0..frames)
            .map(|t| match tl.window_of(t) {
                Some((chain, step)) => Annotation::Auth { chain, step },
                None => {
                    next += 1;
                    Annotation::Workload(next - 1)
                }
            })
            .collect()
    };
    let n_func = layout
        .iter()
        .filter(|a| matches!(a, Annotation::Workload(_)))
        .count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Validation {
        compared: 0,
        mismatches: 0,
    };
    while v.compared < min_vectors.max(1) {
        let workloads: Vec<Vec<Bits>> = (0..64)
            .map(|_| (0..n_func).map(|_| Bits::random(width, &mut rng)).collect())
            .collect();
        let words: Vec<Vec<u64>> = layout
            .iter()
            .map(|a| {
                (0..width)
                    .map(|k| match *a {
                        Annotation::Auth { chain, step } => {
                            if keys[chain][step][k] {
                                u64::MAX
                            } else {
                                0
                            }
                        }
                        Annotation::Workload(i) => workloads
                            .iter()
                            .enumerate()
                            .fold(0, |w, (lane, wl)| w | (u64::from(wl[i][k]) << lane)),
                    })
                    .collect()
            })
            .collect();
        let outs = simulate_lanes(enc, &words);
        for (lane, wl) in workloads.iter().enumerate() {
            let answer = oracle.query(wl)?;
            let mut bad = false;
            for (t, a) in layout.iter().enumerate() {
                if let Annotation::Workload(i) = *a {
                    let got = outs[t].iter().map(|w| w >> lane & 1 == 1);
                    bad |= got.zip(answer[i].as_slice()).any(|(g, &y)| g != y);
                    v.compared += 1;
                }
            }
            v.mismatches += usize::from(bad);
        }
    }
    Ok(v)
}
