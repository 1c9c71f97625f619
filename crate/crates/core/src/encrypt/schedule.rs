//! The secret a trusted key manager holds, and the offline replay of the
//! back-jumping controller that tells it when to authenticate.

use serde::{Deserialize, Serialize};

use super::{derive_sbj, EncryptConfig, EncryptError};
use crate::bits::Bits;
use crate::lfsr::Lfsr;

pub const SCHEDULE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeySchedule {
    pub version: u32,
    pub circuit: String,
    /// PRNG width.
    pub n: u8,
    pub taps: Vec<u8>,
    /// PRNG state after reset; always zero for the XNOR LFSR.
    pub reset_seed: u32,
    /// Cycles per key sequence.
    pub c: usize,
    /// Bits of the back-jumping state.
    pub l: u8,
    /// Primary-input width (key pattern width).
    pub i: usize,
    /// `key_table[s][p]` is the pattern applied at step `p` of chain `s`.
    pub key_table: Vec<Vec<Bits>>,
    pub master_seed: u64,
    pub config: EncryptConfig,
}

/// One authentication window of a trusted run: `c` key cycles starting at
/// `start` on chain `chain`, followed by `functional_len` functional cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthWindow {
    pub start: usize,
    pub chain: usize,
    pub functional_len: usize,
}

impl AuthWindow {
    /// First functional cycle after the window.
    pub fn functional_start(&self, c: usize) -> usize {
        self.start + c
    }

    /// Start of the next window.
    pub fn next_start(&self, c: usize) -> usize {
        self.start + c + self.functional_len
    }
}

/// Offline replay of the back-jumping controller for a PRNG in its reset
/// state. Depends only on public design parameters, never on key values.
pub fn window_timing(mut prng: Lfsr, c: usize, l: u8, horizon: usize) -> Vec<AuthWindow> {
    let mut cycle = 0usize;
    let mut out = Vec::new();
    let mut chain = 0usize;
    while cycle < horizon {
        let start = cycle;
        for _ in 0..c {
            prng.advance();
        }
        cycle += c;
        let t_bj = (prng.state() as usize).max(1);
        for _ in 0..t_bj - 1 {
            prng.advance();
        }
        let next_chain = derive_sbj(u64::from(prng.state()), l) as usize;
        prng.advance();
        cycle += t_bj;
        out.push(AuthWindow {
            start,
            chain,
            functional_len: t_bj,
        });
        chain = next_chain;
    }
    out
}

impl KeySchedule {
    pub fn lfsr(&self) -> Lfsr {
        Lfsr::new(self.n, Some(&self.taps), self.reset_seed).expect("schedule holds a valid LFSR")
    }

    pub fn key(&self, chain: usize, step: usize) -> &Bits {
        &self.key_table[chain][step]
    }

    /// Replays the PRNG and counter from reset, assuming every window is
    /// authenticated on time. Returns every window starting before
    /// `horizon` cycles.
    ///
    /// On the cycle that completes a key sequence the controller latches
    /// `t_bj = max(r_next, 1)`, where `r_next` is the PRNG word of the first
    /// functional cycle. On the last functional cycle it samples the current
    /// word `r` and jumps to chain `r mod 2^l`.
    pub fn windows(&self, horizon: usize) -> Vec<AuthWindow> {
        window_timing(self.lfsr(), self.c, self.l, horizon)
    }

    /// Cycle indices where the design jumps back to the encrypted mode, i.e.
    /// the start of every window after the first.
    pub fn back_jump_cycles(&self, horizon: usize) -> Vec<usize> {
        self.windows(horizon)
            .iter()
            .skip(1)
            .map(|w| w.start)
            .collect()
    }

    pub fn to_json(&self) -> String {
        let file = ScheduleFile {
            version: self.version,
            circuit: self.circuit.clone(),
            n: self.n,
            taps: self.taps.clone(),
            reset_seed: self.reset_seed,
            c: self.c,
            l: self.l,
            i: self.i,
            key_table: self
                .key_table
                .iter()
                .map(|row| row.iter().map(Bits::to_hex).collect())
                .collect(),
            master_seed: self.master_seed,
            config: self.config.clone(),
        };
        serde_json::to_string_pretty(&file).expect("schedule serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, EncryptError> {
        let f: ScheduleFile =
            serde_json::from_str(text).map_err(|e| EncryptError::Schedule(e.to_string()))?;
        if f.version != SCHEDULE_VERSION {
            return Err(EncryptError::Schedule(format!(
                "unsupported schedule version {}",
                f.version
            )));
        }
        let n_chains = 1usize << f.l;
        if f.key_table.len() != n_chains || f.key_table.iter().any(|r| r.len() != f.c) {
            return Err(EncryptError::Schedule(format!(
                "key table must have {n_chains} rows of {} patterns",
                f.c
            )));
        }
        Lfsr::new(f.n, Some(&f.taps), f.reset_seed)
            .map_err(|e| EncryptError::Schedule(e.to_string()))?;
        let key_table = f
            .key_table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|h| Bits::from_hex(h, f.i))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| EncryptError::Schedule(e.to_string()))?;
        Ok(KeySchedule {
            version: f.version,
            circuit: f.circuit,
            n: f.n,
            taps: f.taps,
            reset_seed: f.reset_seed,
            c: f.c,
            l: f.l,
            i: f.i,
            key_table,
            master_seed: f.master_seed,
            config: f.config,
        })
    }
}

/// On-disk form: patterns as bit-0-LSB hex strings.
#[derive(Serialize, Deserialize)]
struct ScheduleFile {
    version: u32,
    circuit: String,
    n: u8,
    taps: Vec<u8>,
    reset_seed: u32,
    c: usize,
    l: u8,
    i: usize,
    key_table: Vec<Vec<String>>,
    master_seed: u64,
    config: EncryptConfig,
}
