//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p qpe-core --test acceptance -- --nocapture` to see the lines.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{branch_oracle, hadamard_p0, max_abs_diff, qpe_law, TOL};
use qpe_core::exec::outcome_distribution;
use qpe_core::harness::{read_qasm, run_experiment, ExperimentConfig, Method};
use qpe_core::qpe::{
    build_hadamard_test, build_inverse_qft, build_iterative_step, build_modified_lloyd,
    build_qft_qpe, build_semiclassical_iqft_qpe, iterative_estimate, kitaev_estimate,
    required_samples, PhasePoint,
};
use qpe_core::{Circuit, NoiseModel};

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

type Builder = fn(usize, &PhasePoint) -> qpe_core::Result<Circuit>;

const QFT_FAMILY: [(&str, Builder); 3] = [
    ("qft", build_qft_qpe),
    ("modified", build_modified_lloyd),
    ("semiclassical", build_semiclassical_iqft_qpe),
];

fn exact_reproduction() -> Outcome {
    let mut failures = Vec::new();
    for method in [Method::Qft, Method::Modified, Method::Semiclassical] {
        let report = run_experiment(&ExperimentConfig::new(method, 4, "1011")).unwrap();
        let hist = &report.histogram;
        if hist.counts.len() != 1 || hist.count("1011") != 1024 || hist.shots != 1024 {
            failures.push(format!("{method} histogram {:?}", hist.counts));
        }
    }
    let phi = PhasePoint::from_bitstring("1011").unwrap();
    let kitaev = kitaev_estimate(4, &phi, 1024, None, 0).unwrap();
    let iterative = iterative_estimate(4, &phi, 1024, None, 0).unwrap();
    for (name, est) in [("kitaev", kitaev), ("iterative", iterative)] {
        if est.bits != [1, 0, 1, 1] {
            failures.push(format!("{name} bits {:?}", est.bits));
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "all five methods give 1011".into()
        } else {
            failures.join("; ")
        },
    )
}

fn kitaev_probability_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let k = rng.random_range(1..=6);
        let phi = rng.random::<f64>();
        let point = PhasePoint::from_turns(phi).unwrap();
        for use_s in [false, true] {
            let dist =
                outcome_distribution(&build_hadamard_test(k, use_s, &point).unwrap()).unwrap();
            worst = worst.max((dist[0] - hadamard_p0(k, use_s, phi)).abs());
        }
    }
    check(
        worst <= TOL,
        format!("max |P(0) - analytic| = {worst:.2e} over 100 (k, phi) pairs, both variants"),
    )
}

fn exhaustive_exactness() -> Outcome {
    let mut worst = 0.0f64;
    for m in 0..16usize {
        let phi = PhasePoint::from_turns(m as f64 / 16.0).unwrap();
        for (_, build) in QFT_FAMILY {
            let dist = outcome_distribution(&build(4, &phi).unwrap()).unwrap();
            worst = worst.max((1.0 - dist[m]).abs());
        }
    }
    check(
        worst <= TOL,
        format!("max |1 - P(m)| = {worst:.2e} over 16 phases x 3 builders"),
    )
}

fn semiclassical_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(1..=5);
        let phi = PhasePoint::from_turns(rng.random::<f64>()).unwrap();
        let semi = branch_oracle(&build_semiclassical_iqft_qpe(n, &phi).unwrap());
        let modified = outcome_distribution(&build_modified_lloyd(n, &phi).unwrap()).unwrap();
        worst = worst.max(max_abs_diff(&semi, &modified));
        // both must also follow the textbook outcome law
        worst = worst.max(max_abs_diff(&modified, &qpe_law(n, phi.value_turns)));
    }
    check(
        worst <= TOL,
        format!("max distribution gap = {worst:.2e} over 20 random (n <= 5, phi)"),
    )
}

fn gate_counts() -> Outcome {
    let phi = PhasePoint::from_bitstring("1011").unwrap();
    let counts: Vec<usize> = QFT_FAMILY
        .iter()
        .map(|(_, build)| build(4, &phi).unwrap().gate_counts().two_qubit)
        .collect();
    check(
        counts == [21, 6, 0],
        format!("two-qubit gates qft/modified/semiclassical = {counts:?}"),
    )
}

fn noise_ordering() -> Outcome {
    let mut mean = [0.0f64; 2];
    let mut modified_modes = 0;
    for seed in 0..20 {
        for (i, method) in [Method::Qft, Method::Modified].into_iter().enumerate() {
            let mut config = ExperimentConfig::new(method, 4, "1011");
            config.noise = Some(NoiseModel::new(0.002, 0.02, 0.03).unwrap());
            config.seed = seed;
            let report = run_experiment(&config).unwrap();
            mean[i] += report.success_probability.unwrap() / 20.0;
            if method == Method::Modified && report.mode_bitstring == "1011" {
                modified_modes += 1;
            }
        }
    }
    let gap = mean[1] - mean[0];
    check(
        gap >= 0.1 && modified_modes >= 16,
        format!(
            "mean success qft {:.3}, modified {:.3} (gap {gap:.3}); modified mode 1011 in {modified_modes}/20",
            mean[0], mean[1]
        ),
    )
}

fn sampling_consistency() -> Outcome {
    let shots = required_samples(0.05, 0.05).unwrap();
    let phi = PhasePoint::from_bitstring("1011").unwrap();
    let hits = (0..100)
        .filter(|&seed| kitaev_estimate(4, &phi, shots, None, seed).unwrap().bits == [1, 0, 1, 1])
        .count();
    check(
        hits >= 95,
        format!("{hits}/100 repetitions recover 1011 at {shots} shots per circuit"),
    )
}

fn builder_circuits(max_n: usize, rng: &mut ChaCha8Rng) -> Vec<Circuit> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let phi = PhasePoint::from_turns(rng.random::<f64>()).unwrap();
        out.push(build_inverse_qft(n).unwrap());
        for (_, build) in QFT_FAMILY {
            out.push(build(n, &phi).unwrap());
        }
        out.push(build_hadamard_test(n, false, &phi).unwrap());
        out.push(build_hadamard_test(n, true, &phi).unwrap());
        let tail: Vec<u8> = (n..max_n).map(|_| rng.random_range(0..2)).collect();
        out.push(build_iterative_step(n, &phi, &tail).unwrap());
    }
    out
}

fn determinism_and_round_trip() -> Outcome {
    let mut failures = Vec::new();
    for method in Method::ALL {
        let mut config = ExperimentConfig::new(method, 4, "1011");
        config.noise = Some(NoiseModel::default());
        config.seed = 11;
        config.shots = 256;
        let a = run_experiment(&config).unwrap().to_json();
        let b = run_experiment(&config).unwrap().to_json();
        if a != b {
            failures.push(format!("{method} report differs between runs"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let circuits = builder_circuits(6, &mut rng);
    for circuit in &circuits {
        match read_qasm(&circuit.to_qasm()) {
            Ok(back) if &back == circuit => {}
            Ok(_) => failures.push(format!(
                "round trip changed a {}-qubit circuit",
                circuit.num_qubits()
            )),
            Err(e) => failures.push(format!("re-import failed: {e}")),
        }
    }
    let detail = if failures.is_empty() {
        format!(
            "reports byte-identical for 5 methods; {} circuits round-trip",
            circuits.len()
        )
    } else {
        failures.join("; ")
    };
    check(failures.is_empty(), detail)
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        (
            "1 exact-phase reproduction",
            exact_reproduction,
            Some(Duration::from_secs(1)),
        ),
        (
            "2 kitaev probability oracle",
            kitaev_probability_oracle,
            Some(Duration::from_secs(1)),
        ),
        (
            "3 exhaustive exactness",
            exhaustive_exactness,
            Some(Duration::from_secs(2)),
        ),
        (
            "4 semiclassical equivalence",
            semiclassical_equivalence,
            Some(Duration::from_secs(5)),
        ),
        ("5 gate counts", gate_counts, None),
        (
            "6 noise ordering",
            noise_ordering,
            Some(Duration::from_secs(30)),
        ),
        (
            "7 sampling consistency",
            sampling_consistency,
            Some(Duration::from_secs(60)),
        ),
        (
            "8 determinism and round trip",
            determinism_and_round_trip,
            None,
        ),
    ];
    let mut failed = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let passed = outcome.passed && in_time;
        let budget_note = match budget {
            Some(b) if !in_time => format!(", over budget {:.0?}", b),
            _ => String::new(),
        };
        println!(
            "criterion {name}: {} ({}; {:.2?}{budget_note})",
            if passed { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed
        );
        if !passed {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
