use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::ShotRunner;
use crate::noise::NoiseModel;
use crate::qpe::builders::build_iterative_step;
use crate::qpe::phase::{bits_to_turns, PhasePoint};
use crate::qpe::PhaseEstimate;

/// Majority vote behind one iteratively estimated bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitVote {
    /// 1-based bit position `j` of `x_j`.
    pub position: usize,
    pub ones: u64,
    pub shots: u64,
    /// The vote split evenly and the bit defaulted to 0.
    pub tie: bool,
}

/// Estimates `x_n` first, then feeds each estimated bit back into the next step's
/// correction rotation. Step `j` uses stream tag `j`.
pub fn iterative_estimate(
    n_bits: usize,
    phi: &PhasePoint,
    shots_per_bit: u64,
    noise: Option<&NoiseModel>,
    seed: u64,
) -> Result<PhaseEstimate> {
    iterative_estimate_with(
        n_bits,
        phi,
        &ShotRunner::new(shots_per_bit, seed, noise.copied()),
    )
}

pub fn iterative_estimate_with(
    n_bits: usize,
    phi: &PhasePoint,
    runner: &ShotRunner,
) -> Result<PhaseEstimate> {
    if n_bits == 0 {
        return Err(Error::config("n_bits must be at least 1"));
    }
    let mut bits = vec![0u8; n_bits];
    let mut votes = Vec::with_capacity(n_bits);
    for j in (1..=n_bits).rev() {
        let circuit = build_iterative_step(j, phi, &bits[j..])?;
        let hist = runner.run(&circuit, j as u64)?;
        let ones = hist.count("1");
        let tie = 2 * ones == hist.shots;
        bits[j - 1] = u8::from(2 * ones > hist.shots);
        votes.push(BitVote {
            position: j,
            ones,
            shots: hist.shots,
            tie,
        });
    }
    Ok(PhaseEstimate {
        phi_hat_turns: bits_to_turns(&bits),
        bits,
        rounds: Vec::new(),
        votes,
        shots_used: n_bits as u64 * runner.shots,
    })
}
