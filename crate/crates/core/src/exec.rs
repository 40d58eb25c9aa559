//! Circuit execution: exact outcome distributions, distribution sampling, and
//! per-shot noisy trajectories.
//!
//! Every shot draws from its own ChaCha stream keyed by `(seed, circuit tag)`
//! and indexed by the shot number, so histograms do not depend on how shots
//! are scheduled across threads.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::histogram::{bitstring, ShotHistogram};
use crate::noise::{apply_gate_noise, flip_readout, NoiseModel};
use crate::statevector::{sample_tallies, Gate2, StateVector};

pub type RandomSource = ChaCha8Rng;

/// Largest classical register for which a dense outcome distribution is built.
const MAX_DENSE_CLBITS: usize = 24;
/// Branches lighter than this are dropped during enumeration.
const BRANCH_FLOOR: f64 = 1e-14;

/// How independent work items (shots, seeds, sweep cells) are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Uses rayon when the `parallel` feature is on; sequential otherwise.
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Evaluates `f(0..n)` and returns results in index order.
pub fn map_indexed<T, F>(n: u64, mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// RNG for shot `shot` of the circuit identified by `tag` in a run seeded with `seed`.
pub fn shot_rng(seed: u64, tag: u64, shot: u64) -> RandomSource {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&tag.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(shot);
    rng
}

fn apply_unitary(state: &mut StateVector, inst: &Instruction) -> Result<()> {
    match *inst {
        Instruction::H { target } => state.apply_single(&Gate2::h(), target),
        Instruction::X { target } => state.apply_single(&Gate2::x(), target),
        Instruction::S { target } => state.apply_single(&Gate2::s(), target),
        Instruction::Phase { theta, target } => state.apply_phase(theta, target),
        Instruction::ControlledPhase {
            theta,
            control,
            target,
        } => state.apply_controlled_phase(theta, control, target),
        Instruction::Measure { .. } | Instruction::ConditionalPhase { .. } => Ok(()),
    }
}

/// Statevector after every gate of a circuit whose measurements are all trailing.
/// Measurements themselves are not applied.
pub fn pre_measurement_state(circuit: &Circuit) -> Result<StateVector> {
    if !circuit.has_only_terminal_measurements() {
        return Err(Error::config(
            "pre-measurement state needs a circuit with only trailing measurements",
        ));
    }
    let mut state = StateVector::new_zero(circuit.num_qubits())?;
    for inst in circuit.instructions() {
        apply_unitary(&mut state, inst)?;
    }
    Ok(state)
}

fn dense_len(circuit: &Circuit) -> Result<usize> {
    if circuit.num_clbits() > MAX_DENSE_CLBITS {
        return Err(Error::config(format!(
            "dense outcome distribution limited to {MAX_DENSE_CLBITS} classical bits"
        )));
    }
    Ok(1usize << circuit.num_clbits())
}

/// Classical-register distribution of a trailing-measurement circuit, read off
/// the final statevector by marginalising through the measurement map.
fn terminal_distribution(circuit: &Circuit) -> Result<Vec<f64>> {
    let state = pre_measurement_state(circuit)?;
    let wiring: Vec<(usize, usize)> = circuit
        .instructions()
        .iter()
        .filter_map(|i| match *i {
            Instruction::Measure { qubit, clbit } => Some((qubit, clbit)),
            _ => None,
        })
        .collect();
    let mut dist = vec![0.0; dense_len(circuit)?];
    for (basis, p) in state.probabilities().into_iter().enumerate() {
        let mut value = 0usize;
        for &(q, c) in &wiring {
            if basis >> q & 1 == 1 {
                value |= 1 << c;
            } else {
                value &= !(1 << c);
            }
        }
        dist[value] += p;
    }
    Ok(dist)
}

/// Exact classical-register distribution found by splitting the state at every
/// measurement and following both outcomes with their weights.
pub fn branch_distribution(circuit: &Circuit) -> Result<Vec<f64>> {
    let mut dist = vec![0.0; dense_len(circuit)?];
    let state = StateVector::new_zero(circuit.num_qubits())?;
    enumerate_branches(circuit.instructions(), state, 0, 1.0, &mut dist)?;
    Ok(dist)
}

fn enumerate_branches(
    rest: &[Instruction],
    mut state: StateVector,
    creg: u64,
    weight: f64,
    dist: &mut [f64],
) -> Result<()> {
    for (pos, inst) in rest.iter().enumerate() {
        match *inst {
            Instruction::Measure { qubit, clbit } => {
                let p1 = state.prob_one(qubit)?;
                for (bit, p) in [(0u8, 1.0 - p1), (1u8, p1)] {
                    if p < BRANCH_FLOOR {
                        continue;
                    }
                    let mut branch = state.clone();
                    branch.collapse(qubit, bit)?;
                    let reg = (creg & !(1 << clbit)) | (u64::from(bit) << clbit);
                    enumerate_branches(&rest[pos + 1..], branch, reg, weight * p, dist)?;
                }
                return Ok(());
            }
            Instruction::ConditionalPhase {
                theta,
                target,
                clbit,
                value,
            } => {
                if (creg >> clbit & 1 == 1) == value {
                    state.apply_phase(theta, target)?;
                }
            }
            _ => apply_unitary(&mut state, inst)?,
        }
    }
    dist[creg as usize] += weight;
    Ok(())
}

/// Exact noiseless outcome distribution over the classical register.
pub fn outcome_distribution(circuit: &Circuit) -> Result<Vec<f64>> {
    if circuit.has_only_terminal_measurements() {
        terminal_distribution(circuit)
    } else {
        branch_distribution(circuit)
    }
}

/// One shot: gates, stochastic errors, collapsing measurements and readout flips.
/// Returns the final classical register.
pub fn run_trajectory<R: rand::Rng + ?Sized>(
    circuit: &Circuit,
    noise: Option<&NoiseModel>,
    rng: &mut R,
) -> Result<u64> {
    let mut state = StateVector::new_zero(circuit.num_qubits())?;
    let mut creg = 0u64;
    for inst in circuit.instructions() {
        match *inst {
            Instruction::Measure { qubit, clbit } => {
                let mut bit = state.measure_qubit(qubit, rng)? == 1;
                if let Some(model) = noise {
                    bit ^= flip_readout(model, rng);
                }
                creg = (creg & !(1 << clbit)) | (u64::from(bit) << clbit);
            }
            Instruction::ConditionalPhase {
                theta,
                target,
                clbit,
                value,
            } => {
                if (creg >> clbit & 1 == 1) == value {
                    state.apply_phase(theta, target)?;
                    if let Some(model) = noise {
                        apply_gate_noise(&mut state, &[target], model, rng)?;
                    }
                }
            }
            _ => {
                apply_unitary(&mut state, inst)?;
                if let Some(model) = noise {
                    apply_gate_noise(&mut state, &inst.qubits(), model, rng)?;
                }
            }
        }
    }
    Ok(creg)
}

/// Shot-sampling settings shared by every circuit of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotRunner {
    pub shots: u64,
    pub seed: u64,
    pub noise: Option<NoiseModel>,
    pub mode: ExecMode,
}

impl ShotRunner {
    pub fn new(shots: u64, seed: u64, noise: Option<NoiseModel>) -> Self {
        ShotRunner {
            shots,
            seed,
            // a zero-rate model must follow the exact noiseless path
            noise: noise.filter(|m| !m.is_noiseless()),
            mode: ExecMode::default(),
        }
    }

    pub fn with_mode(mut self, mode: ExecMode) -> Self {
        self.mode = mode;
        self
    }

    /// Samples `shots` outcomes of `circuit`. `tag` separates the random streams of
    /// different circuits within one run.
    ///
    /// Noiseless circuits with only trailing measurements are sampled from their
    /// exact distribution; anything else is re-executed shot by shot.
    pub fn run(&self, circuit: &Circuit, tag: u64) -> Result<ShotHistogram> {
        if self.shots == 0 {
            return Err(Error::config("shots must be at least 1"));
        }
        let width = circuit.num_clbits();
        if self.noise.is_none() && circuit.has_only_terminal_measurements() {
            let dist = terminal_distribution(circuit)?;
            let mut rng = shot_rng(self.seed, tag, 0);
            let tallies = sample_tallies(&dist, self.shots, &mut rng)?;
            return Ok(ShotHistogram::from_tallies(&tallies, width));
        }
        let noise = self.noise.as_ref();
        let outcomes = map_indexed(self.shots, self.mode, |shot| {
            let mut rng = shot_rng(self.seed, tag, shot);
            run_trajectory(circuit, noise, &mut rng)
        });
        let mut tally: BTreeMap<u64, u64> = BTreeMap::new();
        for outcome in outcomes {
            *tally.entry(outcome?).or_insert(0) += 1;
        }
        let mut hist = ShotHistogram::empty();
        for (value, n) in tally {
            hist.counts.insert(bitstring(value, width), n);
            hist.shots += n;
        }
        Ok(hist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn bell_like() -> Circuit {
        let mut c = Circuit::new(2, 2).unwrap();
        c.append(Instruction::H { target: 0 }).unwrap();
        c.append(Instruction::Measure { qubit: 0, clbit: 1 })
            .unwrap();
        c.append(Instruction::X { target: 1 }).unwrap();
        c.append(Instruction::Measure { qubit: 1, clbit: 0 })
            .unwrap();
        c
    }

    #[test]
    fn terminal_and_branch_distributions_agree() {
        let c = bell_like();
        let a = terminal_distribution(&c).unwrap();
        let b = branch_distribution(&c).unwrap();
        // clbit 1 <- qubit 0 (uniform), clbit 0 <- qubit 1 (always 1)
        assert_eq!(a.len(), 4);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((a[0b01] - 0.5).abs() < 1e-12 && (a[0b11] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn conditional_phase_feeds_forward() {
        // measure |1⟩ into c0, then conditionally rotate |+⟩ by π: ends in |−⟩ -> H -> |1⟩
        let mut c = Circuit::new(2, 2).unwrap();
        c.append(Instruction::X { target: 1 }).unwrap();
        c.append(Instruction::Measure { qubit: 1, clbit: 0 })
            .unwrap();
        c.append(Instruction::H { target: 0 }).unwrap();
        c.append(Instruction::ConditionalPhase {
            theta: PI,
            target: 0,
            clbit: 0,
            value: true,
        })
        .unwrap();
        c.append(Instruction::H { target: 0 }).unwrap();
        c.append(Instruction::Measure { qubit: 0, clbit: 1 })
            .unwrap();
        let d = outcome_distribution(&c).unwrap();
        assert!((d[0b11] - 1.0).abs() < 1e-12);
        let hist = ShotRunner::new(64, 3, None).run(&c, 0).unwrap();
        assert_eq!(hist.count("11"), 64);
    }

    #[test]
    fn zero_noise_model_matches_noiseless_path() {
        let c = bell_like();
        let a = ShotRunner::new(500, 42, None).run(&c, 7).unwrap();
        let b = ShotRunner::new(500, 42, Some(NoiseModel::noiseless()))
            .run(&c, 7)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn modes_produce_identical_histograms() {
        let c = bell_like();
        let runner = ShotRunner::new(2000, 9, Some(NoiseModel::default()));
        let seq = runner.with_mode(ExecMode::Sequential).run(&c, 1).unwrap();
        let par = runner.with_mode(ExecMode::Parallel).run(&c, 1).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.total(), 2000);
    }

    #[test]
    fn streams_are_distinct() {
        use rand::Rng;
        let a: u64 = shot_rng(1, 0, 0).random();
        let b: u64 = shot_rng(1, 0, 1).random();
        let c: u64 = shot_rng(1, 1, 0).random();
        let d: u64 = shot_rng(2, 0, 0).random();
        assert!(a != b && a != c && a != d && b != c);
    }

    #[test]
    fn zero_shots_rejected() {
        assert!(matches!(
            ShotRunner::new(0, 0, None).run(&bell_like(), 0),
            Err(Error::Config(_))
        ));
    }
}
