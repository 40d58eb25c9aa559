//! Dense complex-amplitude simulation of small qubit registers.
//!
//! Basis states are labelled little-endian: qubit 0 is the least significant
//! bit of the amplitude index, so `X` on qubit 0 of `|00⟩` moves the amplitude
//! to index 1.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::histogram::ShotHistogram;

pub const MAX_QUBITS: usize = 24;
pub const NORM_TOLERANCE: f64 = 1e-10;
/// Both outcome probabilities below this means the state is corrupt.
const MEASURE_FLOOR: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 2×2 unitary acting on one qubit. Rows index the output basis state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate2([[Complex64; 2]; 2]);

impl Gate2 {
    /// Validates unitarity (`G·G† = I` entrywise within 1e-10).
    pub fn new(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let g = Gate2(entries);
        let dev = g.unitarity_deviation();
        if dev.is_finite() && dev <= NORM_TOLERANCE {
            Ok(g)
        } else {
            Err(Error::InvalidGate(dev))
        }
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.0
    }

    fn unitarity_deviation(&self) -> f64 {
        let m = &self.0;
        let mut dev = 0.0_f64;
        for r in 0..2 {
            for c in 0..2 {
                let v = m[r][0] * m[c][0].conj() + m[r][1] * m[c][1].conj();
                let expect = if r == c { ONE } else { ZERO };
                dev = dev.max((v - expect).norm());
            }
        }
        dev
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Gate2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn h() -> Self {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Gate2([[a, a], [a, -a]])
    }

    pub fn x() -> Self {
        Gate2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn y() -> Self {
        Gate2([[ZERO, -I], [I, ZERO]])
    }

    pub fn z() -> Self {
        Gate2([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn s() -> Self {
        Gate2([[ONE, ZERO], [ZERO, I]])
    }

    /// `diag(1, e^{iθ})`.
    pub fn phase(theta: f64) -> Self {
        Gate2([[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, theta)]])
    }

    /// `R_k = diag(1, e^{2πi/2^k})`.
    pub fn rk(k: u32) -> Self {
        Self::phase(std::f64::consts::TAU / 2f64.powi(k as i32))
    }
}

/// Full statevector of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `num_qubits` qubits, `1 ≤ num_qubits ≤ 24`.
    pub fn new_zero(num_qubits: usize) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&num_qubits) {
            return Err(Error::config(format!(
                "num_qubits must be in 1..={MAX_QUBITS}, got {num_qubits}"
            )));
        }
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[0] = ONE;
        Ok(StateVector { num_qubits, amps })
    }

    /// Wraps explicit amplitudes; the length must be a power of two and the norm 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() || len > (1 << MAX_QUBITS) {
            return Err(Error::config(format!(
                "amplitude count {len} is not 2^n for 1 <= n <= {MAX_QUBITS}"
            )));
        }
        let state = StateVector {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Numerical(format!(
                "state norm {norm} differs from 1"
            )));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < self.num_qubits {
            Ok(())
        } else {
            Err(Error::QubitIndex {
                index: q,
                num_qubits: self.num_qubits,
            })
        }
    }

    pub fn apply_single(&mut self, gate: &Gate2, target: usize) -> Result<()> {
        self.check_qubit(target)?;
        let [[a, b], [c, d]] = gate.0;
        let stride = 1usize << target;
        for base in (0..self.amps.len()).step_by(stride << 1) {
            for i0 in base..base + stride {
                let i1 = i0 | stride;
                let (v0, v1) = (self.amps[i0], self.amps[i1]);
                self.amps[i0] = a * v0 + b * v1;
                self.amps[i1] = c * v0 + d * v1;
            }
        }
        Ok(())
    }

    /// Multiplies every amplitude whose `target` bit is set by `e^{iθ}`.
    pub fn apply_phase(&mut self, theta: f64, target: usize) -> Result<()> {
        self.check_qubit(target)?;
        let mask = 1usize << target;
        let w = Complex64::from_polar(1.0, theta);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask != 0 {
                *amp *= w;
            }
        }
        Ok(())
    }

    /// Multiplies amplitudes with both `control` and `target` bits set by `e^{iθ}`.
    pub fn apply_controlled_phase(
        &mut self,
        theta: f64,
        control: usize,
        target: usize,
    ) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::SameQubit(control));
        }
        let mask = (1usize << control) | (1usize << target);
        let w = Complex64::from_polar(1.0, theta);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp *= w;
            }
        }
        Ok(())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability that measuring `target` yields 1.
    pub fn prob_one(&self, target: usize) -> Result<f64> {
        self.check_qubit(target)?;
        let mask = 1usize << target;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projects `target` onto `bit` and renormalises. Returns the pre-collapse
    /// probability of that outcome.
    pub fn collapse(&mut self, target: usize, bit: u8) -> Result<f64> {
        let p1 = self.prob_one(target)?;
        let p = if bit == 1 { p1 } else { 1.0 - p1 };
        if p < MEASURE_FLOOR {
            return Err(Error::Numerical(format!(
                "cannot project qubit {target} onto outcome {bit} with probability {p:e}"
            )));
        }
        let mask = 1usize << target;
        let scale = 1.0 / p.sqrt();
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if ((i & mask != 0) as u8) == bit {
                *amp *= scale;
            } else {
                *amp = ZERO;
            }
        }
        Ok(p)
    }

    /// Projective Z measurement of `target`; the state collapses in place.
    pub fn measure_qubit<R: Rng + ?Sized>(&mut self, target: usize, rng: &mut R) -> Result<u8> {
        let p1 = self.prob_one(target)?;
        let p0: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & (1 << target) == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if p0 < MEASURE_FLOOR && p1 < MEASURE_FLOOR {
            return Err(Error::Numerical(format!(
                "both outcomes of qubit {target} have vanishing probability"
            )));
        }
        let bit = u8::from(rng.random::<f64>() * (p0 + p1) < p1);
        self.collapse(target, bit)?;
        Ok(bit)
    }

    /// Draws `shots` full-register samples without disturbing the state.
    pub fn sample_all<R: Rng + ?Sized>(&self, shots: u64, rng: &mut R) -> Result<ShotHistogram> {
        let tallies = sample_tallies(&self.probabilities(), shots, rng)?;
        Ok(ShotHistogram::from_tallies(&tallies, self.num_qubits))
    }
}

/// Draws `shots` indices from `weights` and tallies them by index.
pub(crate) fn sample_tallies<R: Rng + ?Sized>(
    weights: &[f64],
    shots: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::config("shots must be at least 1"));
    }
    let dist = WeightedIndex::new(weights).map_err(|e| Error::Numerical(e.to_string()))?;
    let mut tallies = vec![0u64; weights.len()];
    for _ in 0..shots {
        tallies[dist.sample(rng)] += 1;
    }
    Ok(tallies)
}
