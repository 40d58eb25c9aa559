//! Circuit builders for every estimation method.
//!
//! The unitary under study is `U = diag(1, e^{2πiφ})` with eigenstate `|1⟩`, so a
//! controlled power of `U` is a controlled phase onto the eigenstate qubit.
//!
//! Phase registers follow one convention throughout: register qubit `j` carries
//! weight `2^j` of the Fourier integer `x = φ·2^n`. The swap-free inverse QFT
//! leaves that register bit-reversed, so qubit `j` is measured into classical bit
//! `n-1-j` and the classical register reads `x` directly, printed MSB first as
//! `x₁x₂…x_n`.

use std::f64::consts::TAU;

use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::qpe::phase::PhasePoint;

pub const MAX_HADAMARD_ROUND: usize = 30;
pub const MAX_QFT_QPE_BITS: usize = 20;

/// Classical bit receiving register qubit `qubit` after the inverse QFT.
pub fn readout_clbit(n: usize, qubit: usize) -> usize {
    n - 1 - qubit
}

fn require_bits(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::config("n_bits must be at least 1"))
    } else {
        Ok(())
    }
}

/// Angle of the conjugated rotation `R_k†` used by the inverse QFT.
fn inverse_rotation(k: usize) -> f64 {
    -TAU / 2f64.powi(k as i32)
}

/// Kitaev's Hadamard test for round `k`: qubit 0 is the control, qubit 1 the
/// eigenstate. With `use_s_gate` the control picks up an `S` before the
/// controlled-`U^{2^{k-1}}`, turning the cosine estimate into a sine estimate.
pub fn build_hadamard_test(k: usize, use_s_gate: bool, phi: &PhasePoint) -> Result<Circuit> {
    if k == 0 {
        return Err(Error::config("round k must be at least 1"));
    }
    if k > MAX_HADAMARD_ROUND {
        return Err(Error::config(format!(
            "round k = {k} exceeds the overflow guard of {MAX_HADAMARD_ROUND}"
        )));
    }
    let mut c = Circuit::new(2, 1)?;
    c.append(Instruction::X { target: 1 })?;
    c.append(Instruction::H { target: 0 })?;
    if use_s_gate {
        c.append(Instruction::S { target: 0 })?;
    }
    c.append(Instruction::ControlledPhase {
        theta: TAU * phi.scaled(k as u32 - 1),
        control: 0,
        target: 1,
    })?;
    c.append(Instruction::H { target: 0 })?;
    c.append(Instruction::Measure { qubit: 0, clbit: 0 })?;
    Ok(c)
}

/// One step of iterative estimation for bit `x_j` (`1 ≤ j ≤ n`), given the
/// already-estimated lower-significance bits `tail = [x_{j+1}, …, x_n]`.
///
/// The feedback rotation `ω_j = -2π Σ_{l>j} x_l 2^{-(l-j+1)}` cancels the tail so
/// the control ends in `|x_j⟩` before measurement.
pub fn build_iterative_step(j: usize, phi: &PhasePoint, tail: &[u8]) -> Result<Circuit> {
    if j == 0 || j > MAX_HADAMARD_ROUND {
        return Err(Error::config(format!(
            "bit position j must be in 1..={MAX_HADAMARD_ROUND}, got {j}"
        )));
    }
    let mut c = Circuit::new(2, 1)?;
    c.append(Instruction::X { target: 1 })?;
    c.append(Instruction::H { target: 0 })?;
    c.append(Instruction::ControlledPhase {
        theta: TAU * phi.scaled(j as u32 - 1),
        control: 0,
        target: 1,
    })?;
    c.append(Instruction::Phase {
        theta: feedback_angle(tail),
        target: 0,
    })?;
    c.append(Instruction::H { target: 0 })?;
    c.append(Instruction::Measure { qubit: 0, clbit: 0 })?;
    Ok(c)
}

/// `ω = -2π Σ_i tail[i] · 2^{-(i+2)}`.
pub fn feedback_angle(tail: &[u8]) -> f64 {
    let turns: f64 = tail
        .iter()
        .enumerate()
        .map(|(i, &b)| f64::from(b) * 2f64.powi(-(i as i32 + 2)))
        .sum();
    -TAU * turns
}

/// Swap-free inverse QFT on qubits `0..n`.
///
/// Works from qubit `n-1` (holding `0.x_n`) down to qubit 0: each qubit first has
/// the contribution of every already-finished higher qubit removed by a controlled
/// `R_k†`, then an `H` turns it into a computational-basis bit. On the Fourier
/// state of `x` the result is `x` bit-reversed (qubit `j` holds `x_{j+1}`);
/// see [`readout_clbit`].
pub fn build_inverse_qft(n: usize) -> Result<Circuit> {
    require_bits(n)?;
    let mut c = Circuit::new(n, 0)?;
    for j in (0..n).rev() {
        for m in (j + 1..n).rev() {
            c.append(Instruction::ControlledPhase {
                theta: inverse_rotation(m - j + 1),
                control: m,
                target: j,
            })?;
        }
        c.append(Instruction::H { target: j })?;
    }
    Ok(c)
}

fn append_register_readout(c: &mut Circuit, n: usize) -> Result<()> {
    for q in 0..n {
        c.append(Instruction::Measure {
            qubit: q,
            clbit: readout_clbit(n, q),
        })?;
    }
    Ok(())
}

/// Textbook phase estimation with one eigenstate ancilla (qubit `n`).
///
/// Each controlled-`U^{2^j}` is emitted as `2^j` separate controlled phases,
/// so the circuit carries `(2^n - 1) + n(n-1)/2` two-qubit gates.
pub fn build_qft_qpe(n: usize, phi: &PhasePoint) -> Result<Circuit> {
    require_bits(n)?;
    if n > MAX_QFT_QPE_BITS {
        return Err(Error::config(format!(
            "n_bits = {n} exceeds the size guard of {MAX_QFT_QPE_BITS} for the ancilla circuit"
        )));
    }
    let ancilla = n;
    let theta = TAU * phi.value_turns;
    let mut c = Circuit::new(n + 1, n)?;
    c.append(Instruction::X { target: ancilla })?;
    for j in 0..n {
        c.append(Instruction::H { target: j })?;
    }
    for j in 0..n {
        for _ in 0..1usize << j {
            c.append(Instruction::ControlledPhase {
                theta,
                control: j,
                target: ancilla,
            })?;
        }
    }
    c.extend(&build_inverse_qft(n)?)?;
    append_register_readout(&mut c, n)?;
    Ok(c)
}

fn append_kickback_product_state(c: &mut Circuit, n: usize, phi: &PhasePoint) -> Result<()> {
    for j in 0..n {
        c.append(Instruction::H { target: j })?;
        c.append(Instruction::Phase {
            theta: TAU * phi.scaled(j as u32),
            target: j,
        })?;
    }
    Ok(())
}

/// Ancilla-free phase estimation: the kicked-back product state is written
/// directly with one `H` and one phase rotation per register qubit, leaving
/// only the inverse-QFT rotations as two-qubit gates.
pub fn build_modified_lloyd(n: usize, phi: &PhasePoint) -> Result<Circuit> {
    require_bits(n)?;
    let mut c = Circuit::new(n, n)?;
    append_kickback_product_state(&mut c, n, phi)?;
    c.extend(&build_inverse_qft(n)?)?;
    append_register_readout(&mut c, n)?;
    Ok(c)
}

/// Ancilla-free estimation with a measurement-driven inverse QFT: each qubit is
/// measured as soon as it is finished, and every controlled `R_k†` becomes a
/// phase conditioned on the classical bit of its former control. No two-qubit
/// gates remain.
pub fn build_semiclassical_iqft_qpe(n: usize, phi: &PhasePoint) -> Result<Circuit> {
    require_bits(n)?;
    let mut c = Circuit::new(n, n)?;
    append_kickback_product_state(&mut c, n, phi)?;
    for j in (0..n).rev() {
        for m in (j + 1..n).rev() {
            c.append(Instruction::ConditionalPhase {
                theta: inverse_rotation(m - j + 1),
                target: j,
                clbit: readout_clbit(n, m),
                value: true,
            })?;
        }
        c.append(Instruction::H { target: j })?;
        c.append(Instruction::Measure {
            qubit: j,
            clbit: readout_clbit(n, j),
        })?;
    }
    Ok(c)
}
