//! Reference implementations used as test oracles. Written against plain
//! matrices and complex arithmetic, sharing no code with the simulator.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qpe_core::{Circuit, Instruction};

pub const TOL: f64 = 1e-10;

pub type Matrix = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gate_matrix(inst: &Instruction) -> [[Complex64; 2]; 2] {
    let s = 1.0 / 2f64.sqrt();
    match *inst {
        Instruction::H { .. } => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        Instruction::X { .. } => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        Instruction::S { .. } => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
        Instruction::Phase { theta, .. } | Instruction::ConditionalPhase { theta, .. } => [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), Complex64::from_polar(1.0, theta)],
        ],
        _ => panic!("not a single-qubit gate: {inst:?}"),
    }
}

fn single_target(inst: &Instruction) -> usize {
    match *inst {
        Instruction::H { target }
        | Instruction::X { target }
        | Instruction::S { target }
        | Instruction::Phase { target, .. }
        | Instruction::ConditionalPhase { target, .. } => target,
        _ => panic!("no single target: {inst:?}"),
    }
}

/// Full `2^n × 2^n` matrix of one gate, built element by element.
pub fn embed(inst: &Instruction, n: usize) -> Matrix {
    let dim = 1usize << n;
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    match *inst {
        Instruction::ControlledPhase {
            theta,
            control,
            target,
        } => {
            for (i, row) in m.iter_mut().enumerate() {
                let both = (i >> control) & 1 == 1 && (i >> target) & 1 == 1;
                row[i] = if both {
                    Complex64::from_polar(1.0, theta)
                } else {
                    c(1.0, 0.0)
                };
            }
        }
        _ => {
            let g = gate_matrix(inst);
            let t = single_target(inst);
            for (i, row) in m.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    if (i & !(1 << t)) == (j & !(1 << t)) {
                        *cell = g[(i >> t) & 1][(j >> t) & 1];
                    }
                }
            }
        }
    }
    m
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let dim = a.len();
    let mut out = vec![vec![c(0.0, 0.0); dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..dim {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
                .collect()
        })
        .collect()
}

/// Product of the gate matrices of a measurement-free circuit.
pub fn circuit_unitary(circuit: &Circuit) -> Matrix {
    let n = circuit.num_qubits();
    circuit
        .instructions()
        .iter()
        .filter(|i| !i.is_measure())
        .fold(identity(1 << n), |acc, inst| matmul(&embed(inst, n), &acc))
}

pub fn apply(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn basis(dim: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); dim];
    v[index] = c(1.0, 0.0);
    v
}

/// Exact classical-register distribution, following every measurement branch.
pub fn branch_oracle(circuit: &Circuit) -> Vec<f64> {
    let n = circuit.num_qubits();
    let mut dist = vec![0.0; 1 << circuit.num_clbits()];
    walk(
        circuit.instructions(),
        n,
        basis(1 << n, 0),
        0,
        1.0,
        &mut dist,
    );
    dist
}

fn walk(
    rest: &[Instruction],
    n: usize,
    mut state: Vec<Complex64>,
    creg: usize,
    weight: f64,
    dist: &mut [f64],
) {
    for (pos, inst) in rest.iter().enumerate() {
        match *inst {
            Instruction::Measure { qubit, clbit } => {
                for bit in 0..2 {
                    let mut branch: Vec<Complex64> = state
                        .iter()
                        .enumerate()
                        .map(|(i, a)| {
                            if (i >> qubit) & 1 == bit {
                                *a
                            } else {
                                c(0.0, 0.0)
                            }
                        })
                        .collect();
                    let p: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
                    if p < 1e-15 {
                        continue;
                    }
                    for a in branch.iter_mut() {
                        *a /= p.sqrt();
                    }
                    let reg = (creg & !(1 << clbit)) | (bit << clbit);
                    walk(&rest[pos + 1..], n, branch, reg, weight * p, dist);
                }
                return;
            }
            Instruction::ConditionalPhase { clbit, value, .. } => {
                if ((creg >> clbit) & 1 == 1) == value {
                    state = apply(&embed(inst, n), &state);
                }
            }
            _ => state = apply(&embed(inst, n), &state),
        }
    }
    dist[creg] += weight;
}

/// Textbook QPE outcome law: `P(x) = |2^{-n} Σ_k e^{2πi k (φ − x/2^n)}|²`.
pub fn qpe_law(n: usize, phi: f64) -> Vec<f64> {
    let dim = 1usize << n;
    (0..dim)
        .map(|x| {
            let delta = phi - x as f64 / dim as f64;
            let sum: Complex64 = (0..dim)
                .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 * delta))
                .sum();
            (sum / dim as f64).norm_sqr()
        })
        .collect()
}

/// Matrix of the forward QFT on `n` qubits acting on the bit-reversed register,
/// i.e. the exact inverse of the swap-free inverse QFT.
pub fn forward_qft_bit_reversed(n: usize) -> Matrix {
    let dim = 1usize << n;
    let rev = |x: usize| (0..n).fold(0, |acc, b| acc | (((x >> b) & 1) << (n - 1 - b)));
    let norm = 1.0 / (dim as f64).sqrt();
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    // column rev(x) holds Fourier index x
    for (j, row) in m.iter_mut().enumerate() {
        for x in 0..dim {
            row[rev(x)] = Complex64::from_polar(norm, 2.0 * PI * (j * x) as f64 / dim as f64);
        }
    }
    m
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Hadamard-test law: `P(0) = (1 + cos 2πθ)/2` without S, `(1 − sin 2πθ)/2` with S,
/// where `θ = 2^{k−1} φ`.
pub fn hadamard_p0(k: usize, use_s: bool, phi: f64) -> f64 {
    let theta = 2.0 * PI * phi * 2f64.powi(k as i32 - 1);
    if use_s {
        (1.0 - theta.sin()) / 2.0
    } else {
        (1.0 + theta.cos()) / 2.0
    }
}
