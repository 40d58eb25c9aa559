//! Kitaev's estimator: paired Hadamard tests per round, an `atan2` angle
//! recovery, and bit sharpening across rounds.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_indexed, ShotRunner};
use crate::noise::NoiseModel;
use crate::qpe::builders::build_hadamard_test;
use crate::qpe::phase::{bits_to_turns, circular_distance, PhasePoint};
use crate::qpe::PhaseEstimate;

/// Statistics of round `k`, which probes `φ_k = 2^{k-1} φ mod 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KitaevRound {
    pub k: usize,
    /// Estimate of `cos 2πφ_k`.
    pub c_k: f64,
    /// Estimate of `sin 2πφ_k`.
    pub s_k: f64,
    /// `atan2(s_k, c_k) / 2π mod 1`.
    pub phi_k_hat: f64,
}

impl KitaevRound {
    pub fn from_estimates(k: usize, c_k: f64, s_k: f64) -> Result<Self> {
        if c_k == 0.0 && s_k == 0.0 {
            return Err(Error::Degenerate { k });
        }
        Ok(KitaevRound {
            k,
            c_k,
            s_k,
            phi_k_hat: (s_k.atan2(c_k) / TAU).rem_euclid(1.0),
        })
    }
}

/// How rounds are turned into bits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BitRecovery {
    /// Fix bits from `x_n` up to `x_1`, each from its own round.
    #[default]
    BackSubstitution,
    /// Round the first-round angle to `n` bits and ignore the others.
    RoundFirst,
}

/// Back-substitution from `k = n` down to 1. Round `k` sees `0.x_k x_{k+1}…x_n`;
/// with the tail already fixed, `x_k` is whichever candidate lies closer on the
/// circle to `φ̂_k` (ties go to 0).
pub fn sharpen_bits(rounds: &[KitaevRound], n_bits: usize) -> Result<Vec<u8>> {
    let mut bits = vec![0u8; n_bits];
    for k in (1..=n_bits).rev() {
        let round = rounds
            .iter()
            .find(|r| r.k == k)
            .ok_or_else(|| Error::config(format!("missing Kitaev round k = {k}")))?;
        let tail = bits_to_turns(&bits[k..]) / 2.0;
        let d0 = circular_distance(round.phi_k_hat, tail);
        let d1 = circular_distance(round.phi_k_hat, 0.5 + tail);
        bits[k - 1] = u8::from(d1 < d0);
    }
    Ok(bits)
}

/// `n`-bit rounding of the first-round angle.
pub fn round_first(rounds: &[KitaevRound], n_bits: usize) -> Result<Vec<u8>> {
    let first = rounds
        .iter()
        .find(|r| r.k == 1)
        .ok_or_else(|| Error::config("missing Kitaev round k = 1"))?;
    let scale = 2f64.powi(n_bits as i32);
    let m = ((first.phi_k_hat * scale).round() as u64) % (1u64 << n_bits);
    Ok((0..n_bits)
        .map(|j| ((m >> (n_bits - 1 - j)) & 1) as u8)
        .collect())
}

/// Runs both Hadamard tests for every `k` in `1..=n_bits`. Circuit `(k, S?)` uses
/// stream tag `2(k-1) + S?`.
pub fn kitaev_rounds(
    n_bits: usize,
    phi: &PhasePoint,
    runner: &ShotRunner,
) -> Result<Vec<KitaevRound>> {
    if n_bits == 0 {
        return Err(Error::config("n_bits must be at least 1"));
    }
    let shots = runner.shots as f64;
    let results = map_indexed(2 * n_bits as u64, runner.mode, |tag| {
        let k = tag as usize / 2 + 1;
        let circuit = build_hadamard_test(k, tag % 2 == 1, phi)?;
        let hist = runner.run(&circuit, tag)?;
        Ok::<_, Error>((hist.count("0") as f64 - hist.count("1") as f64) / shots)
    });
    let diffs = results.into_iter().collect::<Result<Vec<f64>>>()?;
    diffs
        .chunks(2)
        .enumerate()
        // cos: P(0|I) - P(1|I); sin: P(1|S) - P(0|S)
        .map(|(i, pair)| KitaevRound::from_estimates(i + 1, pair[0], -pair[1]))
        .collect()
}

pub fn kitaev_estimate(
    n_bits: usize,
    phi: &PhasePoint,
    shots_per_circuit: u64,
    noise: Option<&NoiseModel>,
    seed: u64,
) -> Result<PhaseEstimate> {
    kitaev_estimate_with(
        n_bits,
        phi,
        &ShotRunner::new(shots_per_circuit, seed, noise.copied()),
        BitRecovery::default(),
    )
}

pub fn kitaev_estimate_with(
    n_bits: usize,
    phi: &PhasePoint,
    runner: &ShotRunner,
    recovery: BitRecovery,
) -> Result<PhaseEstimate> {
    let rounds = kitaev_rounds(n_bits, phi, runner)?;
    let bits = match recovery {
        BitRecovery::BackSubstitution => sharpen_bits(&rounds, n_bits)?,
        BitRecovery::RoundFirst => round_first(&rounds, n_bits)?,
    };
    Ok(PhaseEstimate {
        phi_hat_turns: bits_to_turns(&bits),
        bits,
        rounds,
        votes: Vec::new(),
        shots_used: 2 * n_bits as u64 * runner.shots,
    })
}
