use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest binary expansion accepted; beyond this `f64` stops being exact.
pub const MAX_PHASE_BITS: usize = 52;

/// A phase `φ` in turns (`λ = e^{2πiφ}`), optionally with its exact binary digits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub value_turns: f64,
    /// `x₁…x_n`, MSB first; `x₁` has weight 1/2.
    pub bits: Option<Vec<u8>>,
}

impl PhasePoint {
    pub fn from_turns(value_turns: f64) -> Result<Self> {
        if !value_turns.is_finite() || !(0.0..1.0).contains(&value_turns) {
            return Err(Error::config(format!(
                "phase must be in [0, 1) turns, got {value_turns}"
            )));
        }
        Ok(PhasePoint {
            value_turns,
            bits: None,
        })
    }

    /// Parses a string of `0`/`1` digits as `0.x₁x₂…x_n`.
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        if bits.is_empty() || bits.len() > MAX_PHASE_BITS {
            return Err(Error::config(format!(
                "phase_bits must have 1..={MAX_PHASE_BITS} digits, got {:?}",
                bits
            )));
        }
        let digits = bits
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::config(format!(
                    "phase_bits may only contain 0 and 1, got {bits:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_digits(digits))
    }

    pub fn from_digits(digits: Vec<u8>) -> Self {
        PhasePoint {
            value_turns: bits_to_turns(&digits),
            bits: Some(digits),
        }
    }

    /// `2^shift · φ mod 1`, exact for dyadic phases.
    pub fn scaled(&self, shift: u32) -> f64 {
        (self.value_turns * 2f64.powi(shift as i32)).rem_euclid(1.0)
    }

    /// The `n`-bit expansion if `φ` is exactly representable with `n` bits.
    pub fn exact_bits(&self, n: usize) -> Option<Vec<u8>> {
        if n == 0 || n > MAX_PHASE_BITS {
            return None;
        }
        let scaled = self.value_turns * 2f64.powi(n as i32);
        if scaled.fract() != 0.0 {
            return None;
        }
        let m = scaled as u64;
        Some((0..n).map(|j| ((m >> (n - 1 - j)) & 1) as u8).collect())
    }
}

/// `Σ x_j 2^{-j}` for MSB-first digits.
pub fn bits_to_turns(bits: &[u8]) -> f64 {
    bits.iter()
        .enumerate()
        .map(|(j, &b)| f64::from(b) * 2f64.powi(-(j as i32 + 1)))
        .sum()
}

pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter()
        .map(|&b| if b == 1 { '1' } else { '0' })
        .collect()
}

/// Distance between two phases on the unit circle, in turns, in `[0, 0.5]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_parsing() {
        let p = PhasePoint::from_bitstring("1011").unwrap();
        assert_eq!(p.value_turns, 0.6875);
        assert_eq!(p.bits.as_deref(), Some(&[1, 0, 1, 1][..]));
        assert!(PhasePoint::from_bitstring("10a1").is_err());
        assert!(PhasePoint::from_bitstring("").is_err());
        assert!(PhasePoint::from_turns(1.0).is_err());
        assert!(PhasePoint::from_turns(-0.1).is_err());
    }

    #[test]
    fn exactness() {
        let p = PhasePoint::from_turns(0.6875).unwrap();
        assert_eq!(p.exact_bits(4), Some(vec![1, 0, 1, 1]));
        assert_eq!(p.exact_bits(5), Some(vec![1, 0, 1, 1, 0]));
        assert_eq!(p.exact_bits(3), None);
        assert_eq!(PhasePoint::from_turns(0.1).unwrap().exact_bits(8), None);
        assert_eq!(p.scaled(3), 0.5);
    }

    #[test]
    fn circular() {
        assert!((circular_distance(0.95, 0.05) - 0.1).abs() < 1e-12);
        assert_eq!(circular_distance(0.25, 0.75), 0.5);
    }
}
