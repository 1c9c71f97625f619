//! Closed-form security-effort and cycle-delay models, in exact arithmetic.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// Average brute-force effort `N_prng * 2^(i*c - 1)` with `N_prng = 2^n`.
///
/// `i` key-input bits per cycle, `c` cycles per sequence, `n` PRNG width.
/// Requires `i * c >= 1`.
pub fn brute_force_effort(i: u64, c: u64, n: u64) -> BigUint {
    let ic = i.checked_mul(c).expect("i * c overflows");
    assert!(ic >= 1, "brute_force_effort needs i * c >= 1");
    BigUint::one() << (n + ic - 1)
}

/// Renders a non-negative integer as `d.dd...e<exp>` with `digits`
/// significant digits, rounding half up.
pub fn scientific(x: &BigUint, digits: usize) -> String {
    let digits = digits.max(1);
    let s = x.to_str_radix(10);
    if x.is_zero() {
        return format!("{}e0", format_mantissa("0".repeat(digits).as_str()));
    }
    let mut exp = s.len() - 1;
    if s.len() <= digits {
        let padded = format!("{s}{}", "0".repeat(digits - s.len()));
        return format!("{}e{exp}", format_mantissa(&padded));
    }
    let head: BigUint = s[..digits].parse().unwrap();
    let round_up = s.as_bytes()[digits] >= b'5';
    let mut head = if round_up { head + 1u32 } else { head };
    let mut hs = head.to_str_radix(10);
    if hs.len() > digits {
        exp += 1;
        head /= 10u32;
        hs = head.to_str_radix(10);
    }
    format!("{}e{exp}", format_mantissa(&hs))
}

fn format_mantissa(d: &str) -> String {
    if d.len() == 1 {
        d.to_string()
    } else {
        format!("{}.{}", &d[..1], &d[1..])
    }
}

/// Average cycle-delay overhead `t_a / t_b` with the mean back-jumping
/// period `t_b = 2^(n-1)`. Requires `n >= 1`.
pub fn cycle_delay_overhead(t_a: u64, n: u32) -> BigRational {
    assert!(n >= 1, "PRNG width must be at least 1");
    let denom = BigInt::one() << (n - 1);
    BigRational::new(BigInt::from(t_a), denom)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelayPoint {
    pub t_a: u64,
    pub n: u32,
    /// Exact value as `num/den`.
    pub exact: String,
    pub value: f64,
}

/// One curve per authentication length over the PRNG widths `ns`.
pub fn cycle_delay_sweep(
    t_as: &[u64],
    ns: impl IntoIterator<Item = u32> + Clone,
) -> Vec<DelayPoint> {
    t_as.iter()
        .flat_map(|&t_a| {
            ns.clone().into_iter().map(move |n| {
                let r = cycle_delay_overhead(t_a, n);
                DelayPoint {
                    t_a,
                    n,
                    exact: format!("{}/{}", r.numer(), r.denom()),
                    value: r.to_f64().unwrap_or(f64::INFINITY),
                }
            })
        })
        .collect()
}

/// Authentication lengths plotted for the delay curves.
pub const DELAY_TA: [u64; 4] = [8, 16, 64, 128];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effort_small_cases() {
        assert_eq!(brute_force_effort(1, 1, 0), BigUint::one());
        assert_eq!(brute_force_effort(2, 2, 2), BigUint::from(32u32));
    }

    #[test]
    fn effort_reported_value() {
        let e = brute_force_effort(32, 8, 10);
        assert_eq!(e, BigUint::one() << 265u32);
        assert_eq!(scientific(&e, 3), "5.93e79");
    }

    #[test]
    fn scientific_rounding() {
        assert_eq!(scientific(&BigUint::from(9996u32), 3), "1.00e4");
        assert_eq!(scientific(&BigUint::from(12u32), 3), "1.20e1");
        assert_eq!(scientific(&BigUint::from(7u32), 1), "7e0");
        assert_eq!(scientific(&BigUint::from(0u32), 2), "0.0e0");
    }

    #[test]
    fn delay_values() {
        assert_eq!(
            cycle_delay_overhead(8, 11),
            BigRational::new(BigInt::from(1), BigInt::from(128))
        );
        assert_eq!(cycle_delay_overhead(8, 11).to_f64().unwrap(), 0.0078125);
        assert!(cycle_delay_overhead(0, 7).is_zero());
        assert_eq!(
            cycle_delay_overhead(128, 5),
            BigRational::from_integer(8.into())
        );
    }

    #[test]
    fn sweep_shape() {
        let pts = cycle_delay_sweep(&DELAY_TA, 5..=15);
        assert_eq!(pts.len(), 4 * 11);
        // Each curve is strictly decreasing in n.
        for w in pts.windows(2) {
            if w[0].t_a == w[1].t_a {
                assert!(w[1].value < w[0].value);
            }
        }
    }
}
