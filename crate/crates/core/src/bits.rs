//! Fixed-width bit vectors with the project-wide bit ordering: bit 0 is the
//! least significant bit of every rendered integer or hex string.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BitsError {
    #[error("invalid hex digit `{0}`")]
    BadDigit(char),
    #[error("hex string `{text}` does not fit in {width} bits")]
    TooWide { text: String, width: usize },
}

/// An ordered vector of bits; index `k` is bit `k` of the rendered value.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn zeros(width: usize) -> Self {
        Bits(vec![false; width])
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Bits(bits)
    }

    /// Low `width` bits of `value`.
    pub fn from_u64(value: u64, width: usize) -> Self {
        Bits(
            (0..width)
                .map(|k| k < 64 && (value >> k) & 1 == 1)
                .collect(),
        )
    }

    pub fn random<R: Rng + ?Sized>(width: usize, rng: &mut R) -> Self {
        Bits((0..width).map(|_| rng.gen::<bool>()).collect())
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, k: usize) -> bool {
        self.0[k]
    }

    pub fn set(&mut self, k: usize, v: bool) {
        self.0[k] = v;
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<bool> {
        self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Value of the low 64 bits.
    pub fn to_u64(&self) -> u64 {
        self.0
            .iter()
            .take(64)
            .enumerate()
            .fold(0, |acc, (k, &b)| acc | (u64::from(b) << k))
    }

    /// Number of positions where `self` and `other` differ. Widths must match.
    pub fn hamming(&self, other: &Bits) -> usize {
        assert_eq!(self.width(), other.width(), "width mismatch");
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Most-significant digit first; `ceil(width / 4)` digits, at least one.
    pub fn to_hex(&self) -> String {
        let digits = self.width().div_ceil(4).max(1);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4)
                    .filter(|&b| {
                        let k = d * 4 + b;
                        k < self.width() && self.0[k]
                    })
                    .fold(0u32, |acc, b| acc | (1 << b));
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(text: &str, width: usize) -> Result<Self, BitsError> {
        let text = text.trim();
        let text = text
            .strip_prefix("0x")
            .or_else(|| text.strip_prefix("0X"))
            .unwrap_or(text);
        let mut bits = vec![false; width];
        for (d, ch) in text.chars().rev().enumerate() {
            let nibble = ch.to_digit(16).ok_or(BitsError::BadDigit(ch))?;
            for b in 0..4 {
                if (nibble >> b) & 1 == 1 {
                    let k = d * 4 + b;
                    if k >= width {
                        return Err(BitsError::TooWide {
                            text: text.to_string(),
                            width,
                        });
                    }
                    bits[k] = true;
                }
            }
        }
        Ok(Bits(bits))
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({}'h{})", self.width(), self.to_hex())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl From<Vec<bool>> for Bits {
    fn from(v: Vec<bool>) -> Self {
        Bits(v)
    }
}

impl std::ops::Index<usize> for Bits {
    type Output = bool;
    fn index(&self, k: usize) -> &bool {
        &self.0[k]
    }
}

/// Serializes as `{"width": w, "hex": "..."}` so the width survives a
/// round trip even when the top bits are zero.
impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Bits", 2)?;
        st.serialize_field("width", &self.width())?;
        st.serialize_field("hex", &self.to_hex())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            width: usize,
            hex: String,
        }
        let raw = Raw::deserialize(d)?;
        Bits::from_hex(&raw.hex, raw.width).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_is_lsb_first() {
        let b = Bits::from_bools(vec![true, false, true, true, false, true]);
        assert_eq!(b.to_u64(), 0b101101);
        assert_eq!(b.to_hex(), "2d");
        assert_eq!(Bits::from_hex("2d", 6).unwrap(), b);
    }

    #[test]
    fn hex_rejects_overflow_and_junk() {
        assert!(matches!(
            Bits::from_hex("10", 4),
            Err(BitsError::TooWide { .. })
        ));
        assert_eq!(Bits::from_hex("g", 4), Err(BitsError::BadDigit('g')));
        assert_eq!(Bits::from_hex("0x0f", 4).unwrap().to_u64(), 15);
    }

    #[test]
    fn zero_width_renders_one_digit() {
        assert_eq!(Bits::zeros(0).to_hex(), "0");
    }
}
