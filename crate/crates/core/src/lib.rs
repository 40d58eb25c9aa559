//! Statevector simulation and quantum phase estimation.
//!
//! The crate builds and runs the circuits of four phase-estimation methods on a
//! dense statevector simulator, optionally under stochastic Pauli and readout
//! noise, and compares how well each recovers a known phase.
//!
//! ```
//! use qpe_core::harness::{run_experiment, ExperimentConfig, Method};
//!
//! let config = ExperimentConfig::new(Method::Modified, 4, "1011");
//! let report = run_experiment(&config).unwrap();
//! assert_eq!(report.mode_bitstring, "1011");
//! assert_eq!(report.success_probability, Some(1.0));
//! ```
//!
//! Independent shots, seeds and sweep cells run on rayon when the default
//! `parallel` feature is enabled. Results are identical either way.

pub mod circuit;
pub mod error;
pub mod exec;
pub mod harness;
pub mod histogram;
pub mod noise;
pub mod qpe;
pub mod statevector;

pub use circuit::{Circuit, GateCounts, Instruction};
pub use error::{Error, Result};
pub use exec::{ExecMode, RandomSource, ShotRunner};
pub use histogram::ShotHistogram;
pub use noise::NoiseModel;
pub use qpe::{PhaseEstimate, PhasePoint};
pub use statevector::{Gate2, StateVector};
