use rand::Rng;
use serde::{Deserialize, Serialize};

use super::EncryptConfig;
use crate::bits::Bits;

/// Key table and corruption table of the encryption FSM.
///
/// Encrypted-mode states are pairs `(chain, progress)` with `chain` the
/// back-jumping state `s_bj` in `0..2^l` and `progress` in `0..c`. The
/// single functional-mode state drives an all-zero corruption word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncFsmSpec {
    pub inputs: usize,
    pub key_len: usize,
    pub sbj_bits: u8,
    pub enc_out_width: usize,
    /// `key_table[s][p]`: input pattern expected at progress `p` of chain `s`.
    pub key_table: Vec<Vec<Bits>>,
    /// `enc_out_table[s][p]`: corruption word driven in state `(s, p)`;
    /// equal across chains.
    pub enc_out_table: Vec<Vec<u64>>,
}

impl EncFsmSpec {
    pub fn n_chains(&self) -> usize {
        1 << self.sbj_bits
    }

    pub fn enc_out(&self, chain: usize, progress: usize) -> u64 {
        self.enc_out_table[chain][progress]
    }

    /// Corruption word in the functional-mode state.
    pub fn auth_enc_out(&self) -> u64 {
        0
    }
}

/// `f(r)`: the low `l` bits of the PRNG word.
pub fn derive_sbj(r: u64, l: u8) -> u64 {
    if l >= 64 {
        r
    } else {
        r & ((1u64 << l) - 1)
    }
}

/// Builds the FSM tables treating every `enc_out` bit as connected.
pub fn build_enc_fsm<R: Rng + ?Sized>(
    inputs: usize,
    cfg: &EncryptConfig,
    rng: &mut R,
) -> EncFsmSpec {
    build_enc_fsm_connected(inputs, cfg, cfg.enc_out_width, rng)
}

/// Builds the FSM tables when only the low `connected` bits of `enc_out`
/// reach an XOR site. Every encrypted state sets at least one connected bit,
/// and consecutive states of a chain never share a corruption word (when
/// `m >= 2` leaves room for that). The word depends on the progress only, so
/// every chain corrupts the same sites at the same step.
pub fn build_enc_fsm_connected<R: Rng + ?Sized>(
    inputs: usize,
    cfg: &EncryptConfig,
    connected: usize,
    rng: &mut R,
) -> EncFsmSpec {
    let m = cfg.enc_out_width;
    let width_mask = if m >= 64 { u64::MAX } else { (1u64 << m) - 1 };
    let connected = connected.clamp(1, m);
    let conn_mask = if connected >= 64 {
        u64::MAX
    } else {
        (1u64 << connected) - 1
    };
    let n_chains = 1usize << cfg.sbj_bits;
    let c = cfg.key_len;

    let key_table = (0..n_chains)
        .map(|_| (0..c).map(|_| Bits::random(inputs, rng)).collect())
        .collect();

    let mut row: Vec<u64> = Vec::with_capacity(c);
    for _ in 0..c {
        let word = loop {
            let w = rng.gen::<u64>() & width_mask;
            if w & conn_mask == 0 {
                continue;
            }
            if m >= 2 && row.last() == Some(&w) {
                continue;
            }
            break w;
        };
        row.push(word);
    }
    let enc_out_table = vec![row; n_chains];

    EncFsmSpec {
        inputs,
        key_len: c,
        sbj_bits: cfg.sbj_bits,
        enc_out_width: m,
        key_table,
        enc_out_table,
    }
}
