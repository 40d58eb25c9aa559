//! `qpe`: run phase-estimation experiments, sweep noise levels, export circuits.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qpe_core::harness::{
    compare_methods, read_qasm, rows_to_csv, run_experiment, ExperimentConfig, Method,
};
use qpe_core::qpe::{build_hadamard_test, build_iterative_step, PhasePoint};
use qpe_core::{Circuit, Error};
use serde_json::{json, Map, Value};

const EXIT_CONFIG: u8 = 2;
const EXIT_PARSE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qpe",
    version,
    about = "Quantum phase estimation on a noisy statevector simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its JSON report.
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// Report destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the two-qubit error rate for several methods and write a CSV table.
    Compare {
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated methods; defaults to all five.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
        /// Comma-separated two-qubit error rates; falls back to the config's `sweep`.
        #[arg(long, value_delimiter = ',')]
        p2_grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = 20)]
        runs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the OpenQASM 2.0 text of a method's circuit.
    ExportQasm {
        #[arg(long)]
        method: String,
        #[arg(long)]
        n_bits: usize,
        #[arg(long, conflicts_with = "phase")]
        phase_bits: Option<String>,
        #[arg(long)]
        phase: Option<f64>,
        /// Kitaev round `k` or iterative bit position `j`.
        #[arg(long, default_value_t = 1)]
        round: usize,
        /// Kitaev only: export the sine (S-gate) variant of the round.
        #[arg(long)]
        s_gate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse a QASM file written by `export-qasm` and print its gate counts and depth.
    Inspect { file: PathBuf },
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON experiment config; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    n_bits: Option<usize>,
    #[arg(long, conflicts_with = "phase")]
    phase_bits: Option<String>,
    /// Phase in turns, in [0, 1).
    #[arg(long)]
    phase: Option<f64>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    p_readout: Option<f64>,
    /// Kitaev bit recovery: back_substitution or round_first.
    #[arg(long)]
    recovery: Option<String>,
}

enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| {
        CliError::Core(Error::Config(format!(
            "cannot read {}: {e}",
            path.display()
        )))
    })
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

impl ConfigArgs {
    /// Merges the config file (if any) with flag overrides into a JSON object.
    fn merged(&self) -> CliResult<Map<String, Value>> {
        let mut obj = match &self.config {
            Some(path) => match serde_json::from_str::<Value>(&read_text(path)?) {
                Ok(Value::Object(map)) => map,
                Ok(_) => return Err(Error::Config("config must be a JSON object".into()).into()),
                Err(e) => {
                    return Err(Error::Parse {
                        line: e.line(),
                        message: e.to_string(),
                    }
                    .into())
                }
            },
            None => Map::new(),
        };
        if let Some(m) = &self.method {
            obj.insert("method".into(), json!(m));
        }
        if let Some(n) = self.n_bits {
            obj.insert("n_bits".into(), json!(n));
        }
        if let Some(bits) = &self.phase_bits {
            obj.remove("phase_turns");
            obj.insert("phase_bits".into(), json!(bits));
        }
        if let Some(turns) = self.phase {
            obj.remove("phase_bits");
            obj.insert("phase_turns".into(), json!(turns));
        }
        if let Some(s) = self.shots {
            obj.insert("shots".into(), json!(s));
        }
        if let Some(s) = self.seed {
            obj.insert("seed".into(), json!(s));
        }
        if let Some(r) = &self.recovery {
            obj.insert("recovery".into(), json!(r));
        }
        if self.p1.is_some() || self.p2.is_some() || self.p_readout.is_some() {
            let mut noise = match obj.get("noise") {
                Some(Value::Object(n)) => n.clone(),
                _ => match serde_json::to_value(qpe_core::NoiseModel::default()) {
                    Ok(Value::Object(n)) => n,
                    _ => unreachable!("noise model serialises to an object"),
                },
            };
            for (key, v) in [
                ("p1", self.p1),
                ("p2", self.p2),
                ("p_readout", self.p_readout),
            ] {
                if let Some(v) = v {
                    noise.insert(key.into(), json!(v));
                }
            }
            obj.insert("noise".into(), Value::Object(noise));
        }
        Ok(obj)
    }

    fn resolve(obj: Map<String, Value>) -> CliResult<ExperimentConfig> {
        Ok(ExperimentConfig::from_json(
            &Value::Object(obj).to_string(),
        )?)
    }
}

fn parse_methods(names: &[String]) -> CliResult<Vec<Method>> {
    Ok(names
        .iter()
        .map(|s| s.trim().parse::<Method>())
        .collect::<Result<Vec<_>, _>>()?)
}

fn phase_from_flags(phase_bits: Option<&str>, phase: Option<f64>) -> CliResult<PhasePoint> {
    match (phase_bits, phase) {
        (Some(b), None) => Ok(PhasePoint::from_bitstring(b)?),
        (None, Some(t)) => Ok(PhasePoint::from_turns(t)?),
        _ => Err(Error::Config("exactly one of --phase-bits or --phase is required".into()).into()),
    }
}

fn export_circuit(
    method: Method,
    n_bits: usize,
    phi: &PhasePoint,
    round: usize,
    s_gate: bool,
) -> CliResult<Circuit> {
    if round == 0 || round > n_bits {
        return Err(Error::Config(format!("--round must be in 1..={n_bits}, got {round}")).into());
    }
    Ok(match method {
        Method::Kitaev => build_hadamard_test(round, s_gate, phi)?,
        Method::Iterative => {
            // feedback from the ideal lower bits of the phase
            let scaled =
                (phi.value_turns * 2f64.powi(n_bits as i32)).round() as u64 % (1u64 << n_bits);
            let bits: Vec<u8> = (0..n_bits)
                .map(|j| ((scaled >> (n_bits - 1 - j)) & 1) as u8)
                .collect();
            build_iterative_step(round, phi, &bits[round..])?
        }
        register => register.register_circuit(n_bits, phi)?,
    })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run { config, out } => {
            let cfg = ConfigArgs::resolve(config.merged()?)?;
            let report = run_experiment(&cfg)?;
            let mut text = report.to_json();
            text.push('\n');
            write_output(out.as_deref(), &text)
        }
        Command::Compare {
            config,
            methods,
            p2_grid,
            runs,
            out,
        } => {
            let methods = match methods {
                Some(names) => parse_methods(&names)?,
                None => Method::ALL.to_vec(),
            };
            let mut obj = config.merged()?;
            if !obj.contains_key("method") {
                if let Some(first) = methods.first() {
                    obj.insert("method".into(), json!(first.name()));
                }
            }
            let base = ConfigArgs::resolve(obj)?;
            let grid = p2_grid.or_else(|| base.sweep.clone()).ok_or_else(|| {
                Error::Config("--p2-grid is required when the config has no sweep".into())
            })?;
            let rows = compare_methods(&base, &methods, &grid, runs)?;
            write_output(out.as_deref(), &rows_to_csv(&rows)?)
        }
        Command::ExportQasm {
            method,
            n_bits,
            phase_bits,
            phase,
            round,
            s_gate,
            out,
        } => {
            let method: Method = method.parse()?;
            let phi = phase_from_flags(phase_bits.as_deref(), phase)?;
            let circuit = export_circuit(method, n_bits, &phi, round, s_gate)?;
            write_output(out.as_deref(), &circuit.to_qasm())
        }
        Command::Inspect { file } => {
            let circuit = read_qasm(&read_text(&file)?)?;
            let summary = json!({
                "num_qubits": circuit.num_qubits(),
                "num_clbits": circuit.num_clbits(),
                "gate_counts": circuit.gate_counts(),
                "depth": circuit.depth(),
            });
            let text = serde_json::to_string_pretty(&summary).expect("summary serialises") + "\n";
            write_output(None, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Core(e)) => {
            eprintln!("qpe: {e}");
            match e {
                Error::Parse { .. } => ExitCode::from(EXIT_PARSE),
                _ => ExitCode::from(EXIT_CONFIG),
            }
        }
        Err(CliError::Io(msg)) => {
            eprintln!("qpe: {msg}");
            ExitCode::FAILURE
        }
    }
}
