//! Experiment configuration, execution, reporting, and method comparison.

mod qasm_reader;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateCounts};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode, ShotRunner};
use crate::histogram::ShotHistogram;
use crate::noise::NoiseModel;
use crate::qpe::{
    bits_to_string, bits_to_turns, build_hadamard_test, build_iterative_step, build_modified_lloyd,
    build_qft_qpe, build_semiclassical_iqft_qpe, circular_distance, iterative_estimate_with,
    kitaev_estimate_with, BitRecovery, PhaseEstimate, PhasePoint,
};

pub use qasm_reader::read_qasm;

pub const DEFAULT_SHOTS: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Method {
    Kitaev,
    Iterative,
    Qft,
    Modified,
    Semiclassical,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Kitaev,
        Method::Iterative,
        Method::Qft,
        Method::Modified,
        Method::Semiclassical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Kitaev => "kitaev",
            Method::Iterative => "iterative",
            Method::Qft => "qft",
            Method::Modified => "modified",
            Method::Semiclassical => "semiclassical",
        }
    }

    /// Whether the method reads the phase off a single register histogram.
    pub fn is_register_method(self) -> bool {
        matches!(self, Method::Qft | Method::Modified | Method::Semiclassical)
    }

    /// The single circuit of a register method.
    pub fn register_circuit(self, n_bits: usize, phi: &PhasePoint) -> Result<Circuit> {
        match self {
            Method::Qft => build_qft_qpe(n_bits, phi),
            Method::Modified => build_modified_lloyd(n_bits, phi),
            Method::Semiclassical => build_semiclassical_iqft_qpe(n_bits, phi),
            other => Err(Error::config(format!(
                "method {other} runs several circuits"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::config(format!(
                    "method must be one of kitaev, iterative, qft, modified, semiclassical; got {s:?}"
                ))
            })
    }
}

impl TryFrom<String> for Method {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse::<Method>().map_err(|e| match e {
            Error::Config(msg) => msg,
            other => other.to_string(),
        })
    }
}

impl From<Method> for String {
    fn from(m: Method) -> String {
        m.name().to_string()
    }
}

fn default_shots() -> u64 {
    DEFAULT_SHOTS
}

/// One experiment. Exactly one of `phase_turns` / `phase_bits` must be set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub method: Method,
    pub n_bits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_turns: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_bits: Option<String>,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default)]
    pub noise: Option<NoiseModel>,
    #[serde(default)]
    pub seed: u64,
    /// Grid of two-qubit error rates used by `compare` when none is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<f64>>,
    /// Kitaev bit recovery.
    #[serde(default)]
    pub recovery: BitRecovery,
}

impl ExperimentConfig {
    pub fn new(method: Method, n_bits: usize, phase_bits: &str) -> Self {
        ExperimentConfig {
            method,
            n_bits,
            phase_turns: None,
            phase_bits: Some(phase_bits.to_string()),
            shots: DEFAULT_SHOTS,
            noise: None,
            seed: 0,
            sweep: None,
            recovery: BitRecovery::default(),
        }
    }

    /// Parses a JSON config. Malformed JSON is a parse error; well-formed JSON with
    /// bad values is a configuration error.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        let config: ExperimentConfig = serde_json::from_value(value)
            .map_err(|e| Error::config(format!("invalid config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_bits == 0 {
            return Err(Error::config("n_bits must be at least 1"));
        }
        if self.shots == 0 {
            return Err(Error::config("shots must be at least 1"));
        }
        if let Some(noise) = &self.noise {
            noise.validate()?;
        }
        if let Some(grid) = &self.sweep {
            validate_grid(grid)?;
        }
        self.phase().map(|_| ())
    }

    pub fn phase(&self) -> Result<PhasePoint> {
        match (self.phase_turns, &self.phase_bits) {
            (Some(_), Some(_)) => Err(Error::config(
                "phase_turns and phase_bits are mutually exclusive",
            )),
            (None, None) => Err(Error::config(
                "one of phase_turns or phase_bits is required",
            )),
            (Some(t), None) => PhasePoint::from_turns(t).map_err(|e| field_error("phase_turns", e)),
            (None, Some(b)) => {
                PhasePoint::from_bitstring(b).map_err(|e| field_error("phase_bits", e))
            }
        }
    }
}

fn field_error(field: &str, e: Error) -> Error {
    match e {
        Error::Config(msg) => Error::config(format!("{field}: {msg}")),
        other => other,
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::config("p2 grid must not be empty"));
    }
    if let Some(p) = grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::config(format!(
            "p2 grid values must be in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Everything one run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    /// Register methods: shot outcomes. Kitaev and iterative: one entry holding
    /// the recovered bitstring.
    pub histogram: ShotHistogram,
    pub estimate: PhaseEstimate,
    /// Summed over every circuit the method executed.
    pub gate_counts: GateCounts,
    /// Mass on the true bitstring; `None` unless the phase is `n_bits`-exact.
    pub success_probability: Option<f64>,
    /// `|φ̂ - φ|` on the circle, reported for phases that are not `n_bits`-exact.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circular_error: Option<f64>,
    pub mode_bitstring: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

fn multi_circuit_gate_counts(config: &ExperimentConfig, phi: &PhasePoint) -> Result<GateCounts> {
    let mut total = GateCounts::default();
    for k in 1..=config.n_bits {
        match config.method {
            Method::Kitaev => {
                total = total + build_hadamard_test(k, false, phi)?.gate_counts();
                total = total + build_hadamard_test(k, true, phi)?.gate_counts();
            }
            _ => {
                let tail = vec![0u8; config.n_bits - k];
                total = total + build_iterative_step(k, phi, &tail)?.gate_counts();
            }
        }
    }
    Ok(total)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    run_experiment_with(config, ExecMode::default())
}

pub fn run_experiment_with(config: &ExperimentConfig, mode: ExecMode) -> Result<Report> {
    config.validate()?;
    let phi = config.phase()?;
    let n = config.n_bits;
    let runner = ShotRunner::new(config.shots, config.seed, config.noise).with_mode(mode);

    let (histogram, estimate, gate_counts) = if config.method.is_register_method() {
        let circuit = config.method.register_circuit(n, &phi)?;
        let histogram = runner.run(&circuit, 0)?;
        let mode_bits: Vec<u8> = histogram
            .mode()
            .unwrap_or_default()
            .bytes()
            .map(|b| u8::from(b == b'1'))
            .collect();
        let estimate = PhaseEstimate {
            phi_hat_turns: bits_to_turns(&mode_bits),
            bits: mode_bits,
            rounds: Vec::new(),
            votes: Vec::new(),
            shots_used: config.shots,
        };
        (histogram, estimate, circuit.gate_counts())
    } else {
        let estimate = match config.method {
            Method::Kitaev => kitaev_estimate_with(n, &phi, &runner, config.recovery)?,
            _ => iterative_estimate_with(n, &phi, &runner)?,
        };
        let mut histogram = ShotHistogram::empty();
        histogram.record(estimate.bitstring());
        (
            histogram,
            estimate,
            multi_circuit_gate_counts(config, &phi)?,
        )
    };

    let exact = phi.exact_bits(n);
    let success_probability = exact
        .as_ref()
        .map(|bits| histogram.frequency(&bits_to_string(bits)));
    let circular_error = match exact {
        Some(_) => None,
        None => Some(circular_distance(estimate.phi_hat_turns, phi.value_turns)),
    };
    let mode_bitstring = histogram.mode().unwrap_or_default().to_string();
    Ok(Report {
        config: config.clone(),
        histogram,
        estimate,
        gate_counts,
        success_probability,
        circular_error,
        mode_bitstring,
    })
}

/// One cell of a method comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub method: Method,
    pub p2: f64,
    pub mean_success: f64,
    pub two_qubit_gates: usize,
}

/// Runs every `(method, p2)` cell `runs_per_cell` times with seeds
/// `base.seed, base.seed + 1, …` and averages the success probability.
///
/// The cell noise model is the base model (or the default one) rescaled along
/// `p2` with its `p1 : p2 : p_readout` ratios kept, so `p2 = 0` is noiseless.
pub fn compare_methods(
    base: &ExperimentConfig,
    methods: &[Method],
    p2_grid: &[f64],
    runs_per_cell: usize,
) -> Result<Vec<ComparisonRow>> {
    if methods.is_empty() {
        return Err(Error::config("methods list must not be empty"));
    }
    validate_grid(p2_grid)?;
    if runs_per_cell == 0 {
        return Err(Error::config("runs per cell must be at least 1"));
    }
    base.validate()?;
    if base.phase()?.exact_bits(base.n_bits).is_none() {
        return Err(Error::config(
            "compare needs a phase that is exact in n_bits binary digits",
        ));
    }
    let base_noise = base.noise.unwrap_or_default();
    let cells: Vec<(Method, f64)> = methods
        .iter()
        .flat_map(|&m| p2_grid.iter().map(move |&p2| (m, p2)))
        .collect();
    let runs = runs_per_cell as u64;
    let mode = ExecMode::default();

    let reports = map_indexed(cells.len() as u64 * runs, mode, |i| {
        let (method, p2) = cells[(i / runs) as usize];
        let config = ExperimentConfig {
            method,
            noise: Some(base_noise.scaled_to_p2(p2)?),
            seed: base.seed.wrapping_add(i % runs),
            ..base.clone()
        };
        run_experiment_with(&config, mode)
    });
    let reports = reports.into_iter().collect::<Result<Vec<_>>>()?;

    Ok(cells
        .iter()
        .zip(reports.chunks(runs_per_cell))
        .map(|(&(method, p2), chunk)| ComparisonRow {
            method,
            p2,
            mean_success: chunk
                .iter()
                .filter_map(|r| r.success_probability)
                .sum::<f64>()
                / chunk.len() as f64,
            two_qubit_gates: chunk[0].gate_counts.two_qubit,
        })
        .collect())
}

/// CSV with header `method,p2,mean_success,two_qubit_gates`.
pub fn rows_to_csv(rows: &[ComparisonRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Numerical(format!("csv: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Numerical(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
