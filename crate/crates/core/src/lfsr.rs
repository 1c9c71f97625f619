//! XNOR-feedback Fibonacci LFSR used as the back-jumping PRNG.
//!
//! Register cells are numbered `0..n`; the output word has cell `k` at bit
//! `k`. Each step shifts cell `k` into cell `k + 1` and loads cell 0 with
//! the feedback bit. Tap positions are 1-based, tap `t` reading cell `t - 1`.
//!
//! The feedback is a left fold of two-input XNOR gates over the tapped cells
//! in ascending order (a single tap is a plain wire). That is exactly the
//! gate chain the encryptor emits, so the behavioral model and the netlist
//! agree bit for bit. With an even tap count (every entry of
//! [`MAXIMAL_TAPS`]) the all-ones word is the absorbing state and all-zeros
//! is a valid seed.

use serde::{Deserialize, Serialize};

/// Maximal-length tap sets for widths 0..=16 (index = width; 0 and 1 unused).
pub const MAXIMAL_TAPS: [&[u8]; 17] = [
    &[],
    &[],
    &[2, 1],
    &[3, 2],
    &[4, 3],
    &[5, 3],
    &[6, 5],
    &[7, 6],
    &[8, 6, 5, 4],
    &[9, 5],
    &[10, 7],
    &[11, 9],
    &[12, 6, 4, 1],
    &[13, 4, 3, 1],
    &[14, 5, 3, 1],
    &[15, 14],
    &[16, 15, 13, 4],
];

/// Largest width [`Lfsr::period`] will enumerate.
pub const MAX_PERIOD_WIDTH: u8 = 20;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum LfsrError {
    #[error("LFSR width must be between 1 and 32, got {0}")]
    BadWidth(u8),
    #[error("no built-in tap set for width {0}; pass taps explicitly")]
    NoDefaultTaps(u8),
    #[error("tap set must be non-empty")]
    EmptyTaps,
    #[error("tap {tap} out of range 1..={width}")]
    TapOutOfRange { tap: u8, width: u8 },
    #[error("largest tap must equal the width {0}")]
    TopTapMissing(u8),
    #[error("seed {0:#x} is the all-ones lock-up state")]
    AllOnesSeed(u32),
    #[error("seed {seed:#x} does not fit in {width} bits")]
    SeedTooWide { seed: u32, width: u8 },
    #[error("period enumeration limited to width <= {MAX_PERIOD_WIDTH}, got {0}")]
    TooWideToEnumerate(u8),
}

/// Minimal generator interface so other PRNGs can stand in for the LFSR.
pub trait Generator: Clone {
    fn output(&self) -> u64;
    fn step(&self) -> (Self, u64);
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lfsr {
    width: u8,
    taps: Vec<u8>,
    state: u32,
}

impl Lfsr {
    /// `taps = None` selects [`MAXIMAL_TAPS`]. Taps are stored sorted.
    pub fn new(width: u8, taps: Option<&[u8]>, seed: u32) -> Result<Self, LfsrError> {
        if width == 0 || width > 32 {
            return Err(LfsrError::BadWidth(width));
        }
        let mut taps: Vec<u8> = match taps {
            Some(t) => t.to_vec(),
            None => {
                let t = MAXIMAL_TAPS
                    .get(width as usize)
                    .copied()
                    .filter(|t| !t.is_empty())
                    .ok_or(LfsrError::NoDefaultTaps(width))?;
                t.to_vec()
            }
        };
        if taps.is_empty() {
            return Err(LfsrError::EmptyTaps);
        }
        taps.sort_unstable();
        taps.dedup();
        if let Some(&bad) = taps.iter().find(|&&t| t == 0 || t > width) {
            return Err(LfsrError::TapOutOfRange { tap: bad, width });
        }
        if *taps.last().unwrap() != width {
            return Err(LfsrError::TopTapMissing(width));
        }
        let mask = Self::mask_for(width);
        if seed & !mask != 0 {
            return Err(LfsrError::SeedTooWide { seed, width });
        }
        if seed == mask {
            return Err(LfsrError::AllOnesSeed(seed));
        }
        Ok(Lfsr {
            width,
            taps,
            state: seed,
        })
    }

    fn mask_for(width: u8) -> u32 {
        if width == 32 {
            u32::MAX
        } else {
            (1u32 << width) - 1
        }
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn taps(&self) -> &[u8] {
        &self.taps
    }

    pub fn state(&self) -> u32 {
        self.state
    }

    pub fn feedback(&self) -> bool {
        let bit = |t: u8| (self.state >> (t - 1)) & 1 == 1;
        let mut it = self.taps.iter().map(|&t| bit(t));
        let first = it.next().unwrap();
        it.fold(first, |acc, b| !(acc ^ b))
    }

    pub fn next_state(&self) -> u32 {
        ((self.state << 1) | u32::from(self.feedback())) & Self::mask_for(self.width)
    }

    /// Returns the successor and the current output word.
    pub fn step(&self) -> (Lfsr, u32) {
        let next = Lfsr {
            width: self.width,
            taps: self.taps.clone(),
            state: self.next_state(),
        };
        (next, self.state)
    }

    pub fn advance(&mut self) {
        self.state = self.next_state();
    }

    /// Length of the state cycle through the current state.
    pub fn period(&self) -> Result<u64, LfsrError> {
        if self.width > MAX_PERIOD_WIDTH {
            return Err(LfsrError::TooWideToEnumerate(self.width));
        }
        let mut g = self.clone();
        let mut count = 0u64;
        loop {
            g.advance();
            count += 1;
            if g.state == self.state {
                return Ok(count);
            }
        }
    }
}

impl Generator for Lfsr {
    fn output(&self) -> u64 {
        u64::from(self.state)
    }

    fn step(&self) -> (Self, u64) {
        let (g, out) = Lfsr::step(self);
        (g, u64::from(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Independent enumeration: walk from the seed recording every visited
    /// state until a repeat, using a freshly written shift rule.
    fn brute_period(width: u8, taps: &[u8], seed: u32) -> usize {
        let mut seen = HashSet::new();
        let mut s = seed;
        let mut order = Vec::new();
        while seen.insert(s) {
            order.push(s);
            let bits: Vec<bool> = taps.iter().map(|&t| (s >> (t - 1)) & 1 == 1).collect();
            let mut fb = bits[0];
            for &b in &bits[1..] {
                fb = fb == b;
            }
            s = ((s << 1) | fb as u32) & ((1 << width) - 1);
        }
        order.len() - order.iter().position(|&x| x == s).unwrap()
    }

    #[test]
    fn width3_period7() {
        assert_eq!(brute_period(3, &[3, 2], 0), 7);
        let g = Lfsr::new(3, Some(&[3, 2]), 0).unwrap();
        assert_eq!(g.period().unwrap(), 7);
    }

    #[test]
    fn width5_default_period31() {
        assert_eq!(brute_period(5, MAXIMAL_TAPS[5], 0), 31);
        assert_eq!(Lfsr::new(5, None, 0).unwrap().period().unwrap(), 31);
    }

    #[test]
    fn width1_self_loop() {
        let g = Lfsr::new(1, Some(&[1]), 0).unwrap();
        assert_eq!(g.period().unwrap(), 1);
    }

    #[test]
    fn all_ones_seed_rejected() {
        assert_eq!(
            Lfsr::new(3, Some(&[3, 2]), 7),
            Err(LfsrError::AllOnesSeed(7))
        );
        assert!(Lfsr::new(5, None, 31).is_err());
    }

    #[test]
    fn bad_taps_rejected() {
        assert_eq!(Lfsr::new(4, Some(&[]), 0), Err(LfsrError::EmptyTaps));
        assert_eq!(
            Lfsr::new(4, Some(&[5, 4]), 0),
            Err(LfsrError::TapOutOfRange { tap: 5, width: 4 })
        );
        assert_eq!(
            Lfsr::new(4, Some(&[3, 2]), 0),
            Err(LfsrError::TopTapMissing(4))
        );
        assert!(Lfsr::new(4, Some(&[0, 4]), 0).is_err());
    }

    #[test]
    fn step_from_zero_loads_one() {
        let g = Lfsr::new(3, Some(&[3, 2]), 0).unwrap();
        let (g2, out) = g.step();
        assert_eq!(out, 0);
        assert_eq!(g2.state().count_ones(), 1);
        assert_eq!(g.step(), g.step());
    }

    #[test]
    fn seven_distinct_then_repeat() {
        let mut g = Lfsr::new(3, Some(&[3, 2]), 0).unwrap();
        let mut seen = Vec::new();
        for _ in 0..7 {
            let (n, out) = g.step();
            seen.push(out);
            g = n;
        }
        let distinct: HashSet<_> = seen.iter().collect();
        assert_eq!(distinct.len(), 7);
        assert_eq!(g.state(), 0);
    }

    #[test]
    fn period_limit() {
        let g = Lfsr::new(24, Some(&[24, 23, 22, 17]), 0).unwrap();
        assert_eq!(g.period(), Err(LfsrError::TooWideToEnumerate(24)));
    }

    #[test]
    fn full_period_output_sum() {
        // Over one period the outputs are every n-bit word except all-ones.
        for n in 2..=12u8 {
            let mut g = Lfsr::new(n, None, 0).unwrap();
            let period = (1u64 << n) - 1;
            let mut sum = 0u64;
            for _ in 0..period {
                sum += u64::from(g.state());
                g.advance();
            }
            let all: u64 = (0..(1u64 << n)).sum();
            assert_eq!(sum, all - ((1u64 << n) - 1), "width {n}");
        }
    }
}
