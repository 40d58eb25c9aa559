//! Stochastic Pauli noise after gates and symmetric readout flips.
//!
//! Each shot samples its own error trajectory, so a noisy run stays at
//! statevector size and shots are independent.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{Gate2, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Depolarizing probability after each one-qubit gate.
    pub p1: f64,
    /// Depolarizing probability after each two-qubit gate.
    pub p2: f64,
    /// Flip probability for each measured bit.
    pub p_readout: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            p1: 0.002,
            p2: 0.02,
            p_readout: 0.03,
        }
    }
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, p_readout: f64) -> Result<Self> {
        let model = NoiseModel { p1, p2, p_readout };
        model.validate()?;
        Ok(model)
    }

    pub fn noiseless() -> Self {
        NoiseModel {
            p1: 0.0,
            p2: 0.0,
            p_readout: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("p1", self.p1),
            ("p2", self.p2),
            ("p_readout", self.p_readout),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!(
                    "noise.{name} must be in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_readout == 0.0
    }

    /// The model rescaled so its two-qubit rate is `p2`, keeping the ratios
    /// `p1 : p2 : p_readout`. A base with `p2 = 0` uses the default ratios.
    pub fn scaled_to_p2(&self, p2: f64) -> Result<Self> {
        let base = if self.p2 > 0.0 {
            *self
        } else {
            NoiseModel::default()
        };
        let ratio = p2 / base.p2;
        NoiseModel::new(base.p1 * ratio, p2, base.p_readout * ratio)
    }

    fn rate(&self, arity: usize) -> f64 {
        if arity == 1 {
            self.p1
        } else {
            self.p2
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn gate(self) -> Option<Gate2> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(Gate2::x()),
            Pauli::Y => Some(Gate2::y()),
            Pauli::Z => Some(Gate2::z()),
        }
    }
}

/// With probability `p1` (one target) or `p2` (two targets), applies a uniformly
/// chosen non-identity Pauli string to `targets`.
pub fn apply_gate_noise<R: Rng + ?Sized>(
    state: &mut StateVector,
    targets: &[usize],
    model: &NoiseModel,
    rng: &mut R,
) -> Result<()> {
    let arity = targets.len();
    if !(1..=2).contains(&arity) {
        return Err(Error::config(format!(
            "gate noise needs 1 or 2 targets, got {arity}"
        )));
    }
    let p = model.rate(arity);
    if p <= 0.0 || rng.random::<f64>() >= p {
        return Ok(());
    }
    // index 0 of the 4^arity Pauli strings is the identity
    let choices = 4usize.pow(arity as u32);
    let mut code = rng.random_range(1..choices);
    for &q in targets {
        if let Some(g) = Pauli::ALL[code % 4].gate() {
            state.apply_single(&g, q)?;
        }
        code /= 4;
    }
    Ok(())
}

/// Flips each bit independently with probability `p_readout`.
pub fn apply_readout_noise<R: Rng + ?Sized>(
    bits: &[bool],
    model: &NoiseModel,
    rng: &mut R,
) -> Vec<bool> {
    bits.iter().map(|&b| b ^ flip_readout(model, rng)).collect()
}

pub(crate) fn flip_readout<R: Rng + ?Sized>(model: &NoiseModel, rng: &mut R) -> bool {
    model.p_readout > 0.0 && rng.random::<f64>() < model.p_readout
}
