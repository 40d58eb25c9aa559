//! Phase-estimation methods: Kitaev, iterative, inverse-QFT with an ancilla,
//! and the ancilla-free variants.

mod builders;
mod iterative;
mod kitaev;
mod phase;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builders::{
    build_hadamard_test, build_inverse_qft, build_iterative_step, build_modified_lloyd,
    build_qft_qpe, build_semiclassical_iqft_qpe, feedback_angle, readout_clbit, MAX_HADAMARD_ROUND,
    MAX_QFT_QPE_BITS,
};
pub use iterative::{iterative_estimate, iterative_estimate_with, BitVote};
pub use kitaev::{
    kitaev_estimate, kitaev_estimate_with, kitaev_rounds, round_first, sharpen_bits, BitRecovery,
    KitaevRound,
};
pub use phase::{bits_to_string, bits_to_turns, circular_distance, PhasePoint, MAX_PHASE_BITS};

/// Result of any estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimate {
    pub phi_hat_turns: f64,
    /// `x̂₁…x̂_n`, MSB first.
    pub bits: Vec<u8>,
    /// Per-round Kitaev statistics; empty for other methods.
    pub rounds: Vec<KitaevRound>,
    /// Per-bit majority votes of the iterative method; empty for other methods.
    pub votes: Vec<BitVote>,
    pub shots_used: u64,
}

impl PhaseEstimate {
    pub fn bitstring(&self) -> String {
        bits_to_string(&self.bits)
    }
}

/// Hoeffding sample count for estimating a probability within `epsilon` with
/// confidence `1 - delta`: `⌈ln(2/δ) / (2ε²)⌉`.
pub fn required_samples(epsilon: f64, delta: f64) -> Result<u64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::config(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::config(format!(
            "delta must be in (0, 1), got {delta}"
        )));
    }
    let n = ((2.0 / delta).ln() / (2.0 * epsilon * epsilon)).ceil();
    Ok((n as u64).max(1))
}
