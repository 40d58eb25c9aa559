//! Reader for the OpenQASM 2.0 dialect written by [`Circuit::to_qasm`].

use std::sync::LazyLock;

use regex::Regex;

use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};

static QREG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^qreg\s+q\[(\d+)\]$").unwrap());
static CREG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^creg\s+c(\d*)\[(\d+)\]$").unwrap());
static ONE_QUBIT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(h|x|s)\s+q\[(\d+)\]$").unwrap());
static U1: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^u1\(([^)]*)\)\s+q\[(\d+)\]$").unwrap());
static CU1: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^cu1\(([^)]*)\)\s+q\[(\d+)\]\s*,\s*q\[(\d+)\]$").unwrap());
static MEASURE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^measure\s+q\[(\d+)\]\s*->\s*c(\d*)\[(\d+)\]$").unwrap());
static COND_U1: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^if\s*\(\s*c(\d+)\s*==\s*([01])\s*\)\s*u1\(([^)]*)\)\s+q\[(\d+)\]$").unwrap()
});

#[derive(Clone, Copy, PartialEq)]
enum ClassicalLayout {
    Undeclared,
    Single(usize),
    PerBit(usize),
}

impl ClassicalLayout {
    fn width(self) -> usize {
        match self {
            ClassicalLayout::Undeclared => 0,
            ClassicalLayout::Single(n) | ClassicalLayout::PerBit(n) => n,
        }
    }
}

fn num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid number {s:?}")))
}

struct Reader {
    circuit: Option<Circuit>,
    qubits: usize,
    layout: ClassicalLayout,
}

impl Reader {
    fn clbit(&self, register: &str, index: usize, line: usize) -> Result<usize> {
        match (self.layout, register.is_empty()) {
            (ClassicalLayout::Single(_), true) => Ok(index),
            (ClassicalLayout::PerBit(_), false) if index == 0 => num(register, line),
            _ => Err(Error::parse(
                line,
                format!("classical bit c{register}[{index}] does not match declared registers"),
            )),
        }
    }

    fn circuit(&mut self, line: usize) -> Result<&mut Circuit> {
        if self.circuit.is_none() {
            if self.qubits == 0 {
                return Err(Error::parse(line, "statement before qreg declaration"));
            }
            let c = Circuit::new(self.qubits, self.layout.width())
                .map_err(|e| Error::parse(line, e.to_string()))?;
            self.circuit = Some(c);
        }
        Ok(self.circuit.as_mut().expect("initialised above"))
    }

    fn push(&mut self, inst: Instruction, line: usize) -> Result<()> {
        self.circuit(line)?
            .append(inst)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        Ok(())
    }
}

/// Parses text produced by [`Circuit::to_qasm`] back into a circuit.
pub fn read_qasm(text: &str) -> Result<Circuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split("//").next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((1, "OPENQASM 2.0;")) => {}
        Some((n, _)) if n != 1 => return Err(Error::parse(1, "missing OPENQASM 2.0 header")),
        Some((n, other)) => {
            return Err(Error::parse(
                n,
                format!("expected \"OPENQASM 2.0;\", found {other:?}"),
            ))
        }
        None => return Err(Error::parse(1, "empty program")),
    }

    let mut reader = Reader {
        circuit: None,
        qubits: 0,
        layout: ClassicalLayout::Undeclared,
    };

    for (line, raw) in lines {
        let stmt = raw
            .strip_suffix(';')
            .ok_or_else(|| Error::parse(line, "statement must end with ';'"))?
            .trim();
        if stmt == "include \"qelib1.inc\"" {
            continue;
        }
        if let Some(cap) = QREG.captures(stmt) {
            if reader.qubits != 0 || reader.circuit.is_some() {
                return Err(Error::parse(line, "only one qreg declaration is supported"));
            }
            reader.qubits = num(&cap[1], line)?;
            if reader.qubits == 0 {
                return Err(Error::parse(line, "qreg must have at least one qubit"));
            }
            continue;
        }
        if let Some(cap) = CREG.captures(stmt) {
            if reader.circuit.is_some() {
                return Err(Error::parse(line, "creg declared after the first gate"));
            }
            let size: usize = num(&cap[2], line)?;
            reader.layout = match (reader.layout, cap[1].is_empty()) {
                (ClassicalLayout::Undeclared, true) => ClassicalLayout::Single(size),
                (ClassicalLayout::Undeclared, false) | (ClassicalLayout::PerBit(_), false)
                    if size == 1 =>
                {
                    let expected = reader.layout.width();
                    if num::<usize>(&cap[1], line)? != expected {
                        return Err(Error::parse(line, format!("expected register c{expected}")));
                    }
                    ClassicalLayout::PerBit(expected + 1)
                }
                _ => {
                    return Err(Error::parse(
                        line,
                        format!("unsupported creg declaration {stmt:?}"),
                    ))
                }
            };
            continue;
        }
        let inst = if let Some(cap) = ONE_QUBIT.captures(stmt) {
            let target = num(&cap[2], line)?;
            match &cap[1] {
                "h" => Instruction::H { target },
                "x" => Instruction::X { target },
                _ => Instruction::S { target },
            }
        } else if let Some(cap) = U1.captures(stmt) {
            Instruction::Phase {
                theta: num(&cap[1], line)?,
                target: num(&cap[2], line)?,
            }
        } else if let Some(cap) = CU1.captures(stmt) {
            Instruction::ControlledPhase {
                theta: num(&cap[1], line)?,
                control: num(&cap[2], line)?,
                target: num(&cap[3], line)?,
            }
        } else if let Some(cap) = MEASURE.captures(stmt) {
            Instruction::Measure {
                qubit: num(&cap[1], line)?,
                clbit: reader.clbit(&cap[2], num(&cap[3], line)?, line)?,
            }
        } else if let Some(cap) = COND_U1.captures(stmt) {
            if !matches!(reader.layout, ClassicalLayout::PerBit(_)) {
                return Err(Error::parse(
                    line,
                    "conditions need single-bit classical registers",
                ));
            }
            Instruction::ConditionalPhase {
                theta: num(&cap[3], line)?,
                target: num(&cap[4], line)?,
                clbit: num(&cap[1], line)?,
                value: &cap[2] == "1",
            }
        } else {
            let token = stmt
                .split(|c: char| c.is_whitespace() || c == '(')
                .next()
                .unwrap_or(stmt);
            return Err(Error::parse(line, format!("unknown statement {token:?}")));
        };
        reader.push(inst, line)?;
    }

    if reader.qubits == 0 {
        return Err(Error::parse(1, "no qreg declaration"));
    }
    let last = text.lines().count().max(1);
    reader.circuit(last)?;
    Ok(reader.circuit.expect("created above"))
}
