//! Sporadic-authentication sequential encryption.
//!
//! [`encrypt`] wraps an original netlist with
//!
//! * an encryption FSM that checks key sequences on the primary inputs and
//!   drives the corruption word `enc_out` (zero only when authenticated),
//! * XOR key gates on randomly selected original gate outputs,
//! * a back-jumping controller: an XNOR LFSR, an `n`-bit counter and a
//!   latched back-jumping period `t_bj`,
//! * one shadow register per original flip-flop, snapshotted when the design
//!   jumps back and restored on re-authentication.
//!
//! Everything is lowered to `.bench` primitives. The register transfer
//! behaviour, per clock edge:
//!
//! | condition | effect |
//! |---|---|
//! | encrypted `(s,p)`, input = `K[s][p]`, `p < c-1` | `p := p+1` |
//! | encrypted `(s,c-1)`, input = `K[s][c-1]` | enter functional mode; original DFFs := shadow; `t_bj := max(lfsr_next, 1)`; counter := 0 |
//! | encrypted, mismatch | `p := 0` |
//! | functional, `counter + 1 = t_bj` | `s := lfsr mod 2^l`, `p := 0`, shadow := original next state, enter encrypted mode |
//! | functional otherwise | counter += 1 |
//!
//! The LFSR steps on every edge.

mod builder;
mod fsm;
mod schedule;
mod xor;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lfsr::{Lfsr, LfsrError};
use crate::netlist::{Dff, Netlist, NetlistError};
use builder::Builder;

pub use fsm::{build_enc_fsm, build_enc_fsm_connected, derive_sbj, EncFsmSpec};
pub use schedule::{window_timing, AuthWindow, KeySchedule, SCHEDULE_VERSION};
pub use xor::{fresh_prefix, insert_xor, site_count, XorSite};

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum EncryptError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("netlist has no primary inputs to carry key patterns")]
    NoInputs,
    #[error("netlist has no gates to corrupt")]
    NoGates,
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Lfsr(#[from] LfsrError),
    #[error("key schedule: {0}")]
    Schedule(String),
}

/// Design-time parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncryptConfig {
    /// PRNG / counter width `n`.
    pub lfsr_width: u8,
    #[serde(default)]
    pub lfsr_taps: Option<Vec<u8>>,
    /// Width `m` of the corruption word.
    pub enc_out_width: usize,
    /// Cycles per key sequence `c`.
    pub key_len: usize,
    /// Back-jumping state width `l`.
    pub sbj_bits: u8,
    /// Node coverage: XOR sites / original gates.
    pub coverage: f64,
    pub master_seed: u64,
}

impl Default for EncryptConfig {
    fn default() -> Self {
        EncryptConfig {
            lfsr_width: 5,
            lfsr_taps: None,
            enc_out_width: 3,
            key_len: 8,
            sbj_bits: 2,
            coverage: 0.2,
            master_seed: 0x5eed,
        }
    }
}

/// Largest `l` accepted; the key table has `2^l` rows.
pub const MAX_SBJ_BITS: u8 = 12;

impl EncryptConfig {
    pub fn validate(&self) -> Result<(), EncryptError> {
        let bad = |m: String| Err(EncryptError::Config(m));
        if !(1..=64).contains(&self.enc_out_width) {
            return bad(format!(
                "enc_out_width must be 1..=64, got {}",
                self.enc_out_width
            ));
        }
        if self.key_len == 0 {
            return bad("key_len must be at least 1".into());
        }
        if self.sbj_bits == 0 || self.sbj_bits > self.lfsr_width {
            return bad(format!(
                "sbj_bits must be 1..={} (the LFSR width), got {}",
                self.lfsr_width, self.sbj_bits
            ));
        }
        if self.sbj_bits > MAX_SBJ_BITS {
            return bad(format!(
                "sbj_bits above {MAX_SBJ_BITS} make the key table too large"
            ));
        }
        if !(self.coverage > 0.0 && self.coverage <= 1.0) {
            return bad(format!("coverage must be in (0, 1], got {}", self.coverage));
        }
        Lfsr::new(self.lfsr_width, self.lfsr_taps.as_deref(), 0)?;
        Ok(())
    }

    pub fn lfsr(&self) -> Result<Lfsr, EncryptError> {
        Ok(Lfsr::new(self.lfsr_width, self.lfsr_taps.as_deref(), 0)?)
    }

    pub fn progress_bits(&self) -> usize {
        bits_for(self.key_len)
    }
}

/// Bits needed to count `0..n`.
fn bits_for(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Where the added structures live in the emitted netlist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsertionReport {
    pub prefix: String,
    pub sites: Vec<XorSite>,
    pub enc_out_nets: Vec<String>,
    /// Register holding 1 in functional mode.
    pub auth_reg: String,
    pub lfsr_regs: Vec<String>,
    pub counter_regs: Vec<String>,
    pub tbj_regs: Vec<String>,
    pub sbj_regs: Vec<String>,
    pub progress_regs: Vec<String>,
    pub shadow_regs: Vec<String>,
    pub added_gates: usize,
    pub added_dffs: usize,
}

impl InsertionReport {
    /// Registers the encryption FSM adds on top of LFSR, counter and shadows.
    pub fn enc_fsm_state_bits(&self) -> usize {
        1 + self.sbj_regs.len() + self.progress_regs.len() + self.tbj_regs.len()
    }
}

#[derive(Debug, Clone)]
pub struct EncryptedDesign {
    pub netlist: Netlist,
    pub schedule: KeySchedule,
    pub fsm: EncFsmSpec,
    pub report: InsertionReport,
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Literal nets `[!x, x]` for a register bit.
fn literals(b: &mut Builder, net: &str) -> [String; 2] {
    [b.not(net), net.to_string()]
}

pub fn encrypt(nl: &Netlist, cfg: &EncryptConfig) -> Result<EncryptedDesign, EncryptError> {
    cfg.validate()?;
    let n_in = nl.inputs().len();
    if n_in == 0 {
        return Err(EncryptError::NoInputs);
    }
    if nl.gates().is_empty() {
        return Err(EncryptError::NoGates);
    }
    let lfsr = cfg.lfsr()?;
    let n = cfg.lfsr_width as usize;
    let l = cfg.sbj_bits as usize;
    let c = cfg.key_len;
    let m = cfg.enc_out_width;
    let pbits = cfg.progress_bits();
    let n_chains = 1usize << l;

    let prefix = fresh_prefix(nl, "lk");
    let k = site_count(cfg.coverage, nl.gates().len());
    let chosen = xor::choose_sites(nl.gates().len(), k, &mut stream_rng(cfg.master_seed, 1));
    let fsm = build_enc_fsm_connected(n_in, cfg, k.min(m), &mut stream_rng(cfg.master_seed, 2));

    let mut b = Builder::new(&prefix, &nl.inputs()[0]);
    let reg = |b: &Builder, tag: &str, w: usize| -> Vec<String> {
        (0..w).map(|k| b.name(&format!("{tag}{k}"))).collect()
    };
    let lfsr_q = reg(&b, "lfsr", n);
    let cnt_q = reg(&b, "cnt", n);
    let tbj_q = reg(&b, "tbj", n);
    let sbj_q = reg(&b, "sbj", l);
    let prog_q = reg(&b, "prog", pbits);
    let shadow_q = reg(&b, "sh", nl.dffs().len());
    let auth_q = b.name("auth");
    let enc_nets: Vec<String> = (0..m).map(|j| b.name(&format!("enc{j}"))).collect();

    let (orig_gates, sites) = xor::rewrite_gates(nl, &chosen, &enc_nets, &prefix);

    // Mode.
    let f = auth_q.clone();
    let nf = b.not(&f);

    // LFSR: cell 0 takes the XNOR chain over the taps, cell k takes cell k-1.
    let taps = lfsr.taps().to_vec();
    let mut fb = lfsr_q[taps[0] as usize - 1].clone();
    for &t in &taps[1..] {
        fb = b.xnor(&fb, &lfsr_q[t as usize - 1]);
    }
    let mut lfsr_next = vec![fb];
    lfsr_next.extend(lfsr_q[..n - 1].iter().cloned());

    // State decoders and key comparators.
    let sbj_lit: Vec<[String; 2]> = sbj_q.iter().map(|q| literals(&mut b, q)).collect();
    let prog_lit: Vec<[String; 2]> = prog_q.iter().map(|q| literals(&mut b, q)).collect();
    let in_lit: Vec<[String; 2]> = nl.inputs().iter().map(|q| literals(&mut b, q)).collect();
    let state_terms = |s: usize, p: usize| -> Vec<String> {
        let mut t = vec![nf.clone()];
        t.extend((0..l).map(|k| sbj_lit[k][(s >> k) & 1].clone()));
        t.extend((0..pbits).map(|k| prog_lit[k][(p >> k) & 1].clone()));
        t
    };
    let mut decoded = vec![vec![String::new(); c]; n_chains];
    let mut matched = vec![vec![String::new(); c]; n_chains];
    for s in 0..n_chains {
        for p in 0..c {
            let terms = state_terms(s, p);
            decoded[s][p] = b.and(terms.clone());
            let key = &fsm.key_table[s][p];
            let mut mt = terms;
            mt.extend((0..n_in).map(|i| in_lit[i][usize::from(key[i])].clone()));
            matched[s][p] = b.and(mt);
        }
    }

    // enc_out[j] = OR of decoded states whose table word has bit j.
    for (j, net) in enc_nets.iter().enumerate() {
        let terms: Vec<String> = (0..n_chains)
            .flat_map(|s| (0..c).map(move |p| (s, p)))
            .filter(|&(s, p)| (fsm.enc_out_table[s][p] >> j) & 1 == 1)
            .map(|(s, p)| decoded[s][p].clone())
            .collect();
        b.named_or(net.clone(), terms);
    }

    let auth_entry = {
        let t = (0..n_chains).map(|s| matched[s][c - 1].clone()).collect();
        b.or(t)
    };
    let n_auth_entry = b.not(&auth_entry);
    let prog_next: Vec<String> = (0..pbits)
        .map(|bit| {
            let t = (0..n_chains)
                .flat_map(|s| (0..c - 1).map(move |p| (s, p)))
                .filter(|&(_, p)| ((p + 1) >> bit) & 1 == 1)
                .map(|(s, p)| matched[s][p].clone())
                .collect();
            b.or(t)
        })
        .collect();

    // Counter and back-jump condition: hit when counter + 1 == t_bj.
    let mut inc = Vec::with_capacity(n);
    let mut carry: Option<String> = None;
    for q in &cnt_q {
        match carry.take() {
            None => {
                inc.push(b.not(q));
                carry = Some(q.clone());
            }
            Some(cy) => {
                inc.push(b.xor(q, &cy));
                carry = Some(b.and(vec![q.clone(), cy]));
            }
        }
    }
    let eq: Vec<String> = inc.iter().zip(&tbj_q).map(|(a, t)| b.xnor(a, t)).collect();
    let hit = b.and(eq);
    let nhit = b.not(&hit);
    let bj = b.and(vec![f.clone(), hit]);
    let nbj = b.not(&bj);
    let stay = b.and(vec![f.clone(), nhit]);
    let auth_next = b.or(vec![auth_entry.clone(), stay]);

    let cnt_next: Vec<String> = inc
        .iter()
        .map(|x| b.and(vec![f.clone(), x.clone()]))
        .collect();

    // t_bj := max(lfsr_next, 1) on authentication.
    let mut period = lfsr_next.clone();
    period[0] = if n == 1 {
        b.const1()
    } else {
        let upper_zero = b.nor(lfsr_next[1..].to_vec());
        b.or(vec![lfsr_next[0].clone(), upper_zero])
    };
    let tbj_next: Vec<String> = tbj_q
        .iter()
        .zip(&period)
        .map(|(q, v)| b.mux(&auth_entry, &n_auth_entry, v, q))
        .collect();
    let sbj_next: Vec<String> = sbj_q
        .iter()
        .zip(&lfsr_q)
        .map(|(q, r)| b.mux(&bj, &nbj, r, q))
        .collect();

    // Original registers: restore from shadow on authentication; shadow
    // captures the original next state on back-jump.
    let mut dffs = Vec::with_capacity(nl.dffs().len() * 2 + 3 * n + l + pbits + 1);
    let mut shadow_dffs = Vec::with_capacity(nl.dffs().len());
    for (d, sh) in nl.dffs().iter().zip(&shadow_q) {
        let restored = b.mux(&auth_entry, &n_auth_entry, sh, &d.d);
        dffs.push(Dff::new(d.q.clone(), restored));
        let keep = b.mux(&bj, &nbj, &d.d, sh);
        shadow_dffs.push(Dff::new(sh.clone(), keep));
    }
    dffs.extend(shadow_dffs);
    let regs = [
        (&lfsr_q, &lfsr_next),
        (&cnt_q, &cnt_next),
        (&tbj_q, &tbj_next),
        (&sbj_q, &sbj_next),
        (&prog_q, &prog_next),
    ];
    for (qs, ds) in regs {
        for (q, d) in qs.iter().zip(ds.iter()) {
            dffs.push(Dff::new(q.clone(), d.clone()));
        }
    }
    dffs.push(Dff::new(auth_q.clone(), auth_next));

    let mut gates = orig_gates;
    gates.append(&mut b.gates);
    let n_orig_dffs = nl.dffs().len();
    let encrypted = Netlist::new(
        nl.name(),
        nl.inputs().to_vec(),
        nl.outputs().to_vec(),
        gates,
        dffs,
    )?;

    let added_gates = encrypted.gates().len() - nl.gates().len();
    let added_dffs = encrypted.dffs().len() - n_orig_dffs;
    let report = InsertionReport {
        prefix,
        sites,
        enc_out_nets: enc_nets,
        auth_reg: auth_q,
        lfsr_regs: lfsr_q,
        counter_regs: cnt_q,
        tbj_regs: tbj_q,
        sbj_regs: sbj_q,
        progress_regs: prog_q,
        shadow_regs: shadow_q,
        added_gates,
        added_dffs,
    };
    let schedule = KeySchedule {
        version: SCHEDULE_VERSION,
        circuit: nl.name().to_string(),
        n: cfg.lfsr_width,
        taps: lfsr.taps().to_vec(),
        reset_seed: 0,
        c,
        l: cfg.sbj_bits,
        i: n_in,
        key_table: fsm.key_table.clone(),
        master_seed: cfg.master_seed,
        config: cfg.clone(),
    };
    Ok(EncryptedDesign {
        netlist: encrypted,
        schedule,
        fsm,
        report,
    })
}

impl EncryptedDesign {
    /// Decodes `(functional, chain, progress)` from a DFF state vector.
    pub fn fsm_state(&self, state: &[bool]) -> (bool, usize, usize) {
        let nl = &self.netlist;
        let read = |names: &[String]| {
            names.iter().enumerate().fold(0usize, |acc, (k, name)| {
                let pos = nl.dffs().iter().position(|d| &d.q == name).unwrap();
                acc | (usize::from(state[pos]) << k)
            })
        };
        let auth_pos = nl
            .dffs()
            .iter()
            .position(|d| d.q == self.report.auth_reg)
            .unwrap();
        (
            state[auth_pos],
            read(&self.report.sbj_regs),
            read(&self.report.progress_regs),
        )
    }

    /// Corruption word evaluated at one (input, state) point.
    pub fn enc_out_value(&self, inputs: &[bool], state: &[bool]) -> u64 {
        let nets = self.netlist.eval_nets(inputs, state);
        self.report
            .enc_out_nets
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, name)| {
                let id = self.netlist.net_id(name).unwrap();
                acc | (u64::from(nets[id.idx()]) << j)
            })
    }

    /// Positions of the original flip-flops in the encrypted DFF list.
    pub fn original_dff_positions(&self) -> std::ops::Range<usize> {
        0..self.report.shadow_regs.len()
    }
}
