//! Acceptance suite: each criterion runs at its stated scale and tolerance and
//! prints one PASS/FAIL line. Runs without the libtest harness so the lines
//! are always visible; the process exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use affsig::circuit::{amplitude, marginal_probability};
use affsig::f2::BitVec;
use affsig::oracle::random_clifford_circuit;
use affsig::selftest::{self, CheckResult};

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> CheckResult,
}

const SEED: u64 = 0x5eed;

fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find(|l| l.starts_with("VmHWM:"))?
        .split_whitespace()
        .nth(1)?
        .parse()
        .ok()
}

fn large_circuit_queries() -> CheckResult {
    let n = 100;
    let c = random_clifford_circuit(n, 10_000, SEED);
    let zeros = BitVec::zeros(n);

    let start = Instant::now();
    let a = amplitude(&c, &zeros, &zeros).map_err(|e| e.to_string())?;
    let t_amp = start.elapsed();
    if t_amp >= Duration::from_secs(1) {
        return Err(format!("amplitude took {t_amp:?}"));
    }

    let start = Instant::now();
    let p = marginal_probability(&c, &zeros, &[(0, false)]).map_err(|e| e.to_string())?;
    let t_prob = start.elapsed();
    if t_prob >= Duration::from_secs(5) {
        return Err(format!("marginal took {t_prob:?}"));
    }

    let kib = peak_rss_kib().ok_or("VmHWM unavailable")?;
    if kib >= 1 << 20 {
        return Err(format!("peak memory {kib} KiB"));
    }
    println!(
        "    amplitude {a} in {t_amp:?}; Pr[q0=0] = {p} in {t_prob:?}; peak RSS {} MiB",
        kib / 1024
    );
    Ok(1)
}

fn clifford_group_has_24() -> CheckResult {
    match selftest::one_qubit_clifford_count()? {
        24 => Ok(24),
        k => Err(format!("found {k} elements")),
    }
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "generator fidelity (H, P, CNOT vs textbook matrices, 1e-12)",
            budget: Duration::from_secs(1),
            run: selftest::generator_fidelity,
        },
        Criterion {
            id: 2,
            name: "composition = matrix product (200 circuits, n<=4, len<=20, 1e-9)",
            budget: Duration::from_secs(30),
            run: || selftest::composition_vs_dense(200, SEED),
        },
        Criterion {
            id: 3,
            name: "closure operations pointwise (500 signatures, arity<=10, 1e-10)",
            budget: Duration::from_secs(60),
            run: || selftest::closure_pointwise(500, SEED),
        },
        Criterion {
            id: 4,
            name: "unitarize rescaled circuits (300, n<=4, UU*=I to 1e-9, cf nonsingular)",
            budget: Duration::from_secs(60),
            run: || selftest::unitarize_random(300, SEED),
        },
        Criterion {
            id: 5,
            name: "dense rank vs exact nonsingularity (300, n<=3)",
            budget: Duration::MAX,
            run: || selftest::nonsingularity_agreement(300, SEED),
        },
        Criterion {
            id: 6,
            name: "tableaux vs dense conjugation (500 unitaries, n<=4, 1e-9)",
            budget: Duration::MAX,
            run: || selftest::tableau_vs_dense(500, SEED),
        },
        Criterion {
            id: 7,
            name: "one-qubit Clifford group from {H, P} has 24 elements, all unitary",
            budget: Duration::MAX,
            run: clifford_group_has_24,
        },
        Criterion {
            id: 8,
            name: "stabilizer probability law (200 circuits, n<=3)",
            budget: Duration::MAX,
            run: || selftest::probability_law(200, SEED),
        },
        Criterion {
            id: 9,
            name: "100 qubits, 10^4 gates: amplitude <1s, marginal <5s, memory <1GB",
            budget: Duration::MAX,
            run: large_circuit_queries,
        },
        Criterion {
            id: 10,
            name: "format round trips (100 circuits, 100 signatures)",
            budget: Duration::MAX,
            run: || {
                let a = selftest::circuit_format_round_trip(100, SEED)?;
                let b = selftest::signature_format_round_trip(100, SEED)?;
                Ok(a + b)
            },
        },
    ];

    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(_) if elapsed > c.budget => Err(format!("exceeded {:?} budget", c.budget)),
            other => other,
        };
        match verdict {
            Ok(k) => println!(
                "criterion {:>2} PASS  {} [{k} trials, {elapsed:.2?}]",
                c.id, c.name
            ),
            Err(e) => {
                failures += 1;
                println!(
                    "criterion {:>2} FAIL  {} [{elapsed:.2?}]: {e}",
                    c.id, c.name
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
