//! Circuit intermediate representation: an ordered instruction list over a
//! quantum and a classical register, with gate tallies, depth, and
//! OpenQASM 2.0 export.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::MAX_QUBITS;

/// Classical registers are packed into a `u64` during execution.
pub const MAX_CLBITS: usize = 64;

/// One step of a circuit. Angles are radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instruction {
    H {
        target: usize,
    },
    X {
        target: usize,
    },
    S {
        target: usize,
    },
    Phase {
        theta: f64,
        target: usize,
    },
    ControlledPhase {
        theta: f64,
        control: usize,
        target: usize,
    },
    Measure {
        qubit: usize,
        clbit: usize,
    },
    /// `Phase(theta)` on `target`, applied only when classical bit `clbit` equals `value`.
    ConditionalPhase {
        theta: f64,
        target: usize,
        clbit: usize,
        value: bool,
    },
}

impl Instruction {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Instruction::H { target }
            | Instruction::X { target }
            | Instruction::S { target }
            | Instruction::Phase { target, .. }
            | Instruction::ConditionalPhase { target, .. } => vec![target],
            Instruction::ControlledPhase {
                control, target, ..
            } => vec![control, target],
            Instruction::Measure { qubit, .. } => vec![qubit],
        }
    }

    pub fn clbit(&self) -> Option<usize> {
        match *self {
            Instruction::Measure { clbit, .. } | Instruction::ConditionalPhase { clbit, .. } => {
                Some(clbit)
            }
            _ => None,
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match *self {
            Instruction::Phase { theta, .. }
            | Instruction::ControlledPhase { theta, .. }
            | Instruction::ConditionalPhase { theta, .. } => Some(theta),
            _ => None,
        }
    }

    pub fn is_measure(&self) -> bool {
        matches!(self, Instruction::Measure { .. })
    }

    /// Same instruction with its classical bit renamed through `map`.
    pub fn map_clbit(self, map: impl Fn(usize) -> usize) -> Self {
        match self {
            Instruction::Measure { qubit, clbit } => Instruction::Measure {
                qubit,
                clbit: map(clbit),
            },
            Instruction::ConditionalPhase {
                theta,
                target,
                clbit,
                value,
            } => Instruction::ConditionalPhase {
                theta,
                target,
                clbit: map(clbit),
                value,
            },
            other => other,
        }
    }
}

/// Tally of instructions by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub one_qubit: usize,
    pub two_qubit: usize,
    pub measurements: usize,
    pub conditioned: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.one_qubit + self.two_qubit + self.measurements + self.conditioned
    }
}

impl std::ops::Add for GateCounts {
    type Output = GateCounts;

    fn add(self, rhs: GateCounts) -> GateCounts {
        GateCounts {
            one_qubit: self.one_qubit + rhs.one_qubit,
            two_qubit: self.two_qubit + rhs.two_qubit,
            measurements: self.measurements + rhs.measurements,
            conditioned: self.conditioned + rhs.conditioned,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    num_clbits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&num_qubits) {
            return Err(Error::config(format!(
                "num_qubits must be in 1..={MAX_QUBITS}, got {num_qubits}"
            )));
        }
        if num_clbits > MAX_CLBITS {
            return Err(Error::config(format!(
                "num_clbits must be at most {MAX_CLBITS}, got {num_clbits}"
            )));
        }
        Ok(Circuit {
            num_qubits,
            num_clbits,
            instructions: Vec::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    fn validate(&self, inst: &Instruction) -> Result<()> {
        for q in inst.qubits() {
            if q >= self.num_qubits {
                return Err(Error::construction(format!(
                    "qubit {q} out of range for {} qubits in {inst:?}",
                    self.num_qubits
                )));
            }
        }
        if let Instruction::ControlledPhase {
            control, target, ..
        } = inst
        {
            if control == target {
                return Err(Error::construction(format!(
                    "controlled phase needs distinct qubits, got {control} twice"
                )));
            }
        }
        if let Some(c) = inst.clbit() {
            if c >= self.num_clbits {
                return Err(Error::construction(format!(
                    "classical bit {c} out of range for {} clbits in {inst:?}",
                    self.num_clbits
                )));
            }
        }
        if let Some(theta) = inst.theta() {
            if !theta.is_finite() {
                return Err(Error::construction(format!("non-finite angle in {inst:?}")));
            }
        }
        Ok(())
    }

    pub fn append(&mut self, inst: Instruction) -> Result<&mut Self> {
        self.validate(&inst)?;
        self.instructions.push(inst);
        Ok(self)
    }

    /// Appends every instruction of `other`, which must fit this circuit's registers.
    pub fn extend(&mut self, other: &Circuit) -> Result<&mut Self> {
        for inst in &other.instructions {
            self.append(*inst)?;
        }
        Ok(self)
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for inst in &self.instructions {
            match inst {
                Instruction::H { .. }
                | Instruction::X { .. }
                | Instruction::S { .. }
                | Instruction::Phase { .. } => counts.one_qubit += 1,
                Instruction::ControlledPhase { .. } => counts.two_qubit += 1,
                Instruction::Measure { .. } => counts.measurements += 1,
                Instruction::ConditionalPhase { .. } => counts.conditioned += 1,
            }
        }
        counts
    }

    /// Longest chain of instructions that share a qubit or a classical bit.
    pub fn depth(&self) -> usize {
        let mut qubit_level = vec![0usize; self.num_qubits];
        let mut clbit_level = vec![0usize; self.num_clbits];
        let mut depth = 0;
        for inst in &self.instructions {
            let qubits = inst.qubits();
            let clbit = inst.clbit();
            let start = qubits
                .iter()
                .map(|&q| qubit_level[q])
                .chain(clbit.map(|c| clbit_level[c]))
                .max()
                .unwrap_or(0);
            let level = start + 1;
            for q in qubits {
                qubit_level[q] = level;
            }
            if let Some(c) = clbit {
                clbit_level[c] = level;
            }
            depth = depth.max(level);
        }
        depth
    }

    /// True when every measurement is trailing and nothing is classically conditioned,
    /// so the outcome distribution can be read off the final statevector.
    pub fn has_only_terminal_measurements(&self) -> bool {
        let mut measured = vec![false; self.num_qubits];
        for inst in &self.instructions {
            match *inst {
                Instruction::ConditionalPhase { .. } => return false,
                Instruction::Measure { qubit, .. } => {
                    if measured[qubit] {
                        return false;
                    }
                    measured[qubit] = true;
                }
                _ => {
                    if inst.qubits().iter().any(|&q| measured[q]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn uses_conditionals(&self) -> bool {
        self.instructions
            .iter()
            .any(|i| matches!(i, Instruction::ConditionalPhase { .. }))
    }

    /// OpenQASM 2.0 text for this circuit.
    ///
    /// Circuits without classical conditions use one `creg c[m]`. Conditioned
    /// circuits declare one single-bit register `c<j>` per classical bit so that
    /// `if(c<j>==v)` tests exactly that bit, as QASM 2.0 conditions compare whole
    /// registers.
    pub fn to_qasm(&self) -> String {
        let per_bit = self.uses_conditionals();
        let clbit_ref = |c: usize| {
            if per_bit {
                format!("c{c}[0]")
            } else {
                format!("c[{c}]")
            }
        };
        let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let _ = writeln!(out, "qreg q[{}];", self.num_qubits);
        if per_bit {
            for c in 0..self.num_clbits {
                let _ = writeln!(out, "creg c{c}[1];");
            }
        } else if self.num_clbits > 0 {
            let _ = writeln!(out, "creg c[{}];", self.num_clbits);
        }
        for inst in &self.instructions {
            let _ = match *inst {
                Instruction::H { target } => writeln!(out, "h q[{target}];"),
                Instruction::X { target } => writeln!(out, "x q[{target}];"),
                Instruction::S { target } => writeln!(out, "s q[{target}];"),
                Instruction::Phase { theta, target } => {
                    writeln!(out, "u1({}) q[{target}];", format_angle(theta))
                }
                Instruction::ControlledPhase {
                    theta,
                    control,
                    target,
                } => {
                    writeln!(
                        out,
                        "cu1({}) q[{control}],q[{target}];",
                        format_angle(theta)
                    )
                }
                Instruction::Measure { qubit, clbit } => {
                    writeln!(out, "measure q[{qubit}] -> {};", clbit_ref(clbit))
                }
                Instruction::ConditionalPhase {
                    theta,
                    target,
                    clbit,
                    value,
                } => writeln!(
                    out,
                    "if(c{clbit}=={}) u1({}) q[{target}];",
                    u8::from(value),
                    format_angle(theta)
                ),
            };
        }
        out
    }
}

/// Fixed-point rendering with 17 significant digits, enough to round-trip any `f64`.
pub fn format_angle(theta: f64) -> String {
    if theta == 0.0 {
        return format!("{:.16}", 0.0);
    }
    let magnitude = theta.abs().log10().floor() as i32;
    let decimals = (16 - magnitude).clamp(0, 340) as usize;
    format!("{theta:.decimals$}")
}
