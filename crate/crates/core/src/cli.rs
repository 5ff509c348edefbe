//! The `affsig` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a domain check fails (for example a
//! singular operator under `check --expect unitary`), 2 on usage or input
//! errors. All diagnostics go to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::canonical::{check_unitary, UnitaryVerdict};
use crate::circuit::{amplitude, circuit_signature, marginal_probability, sample_outcome, Circuit};
use crate::f2::BitVec;
use crate::oracle::{random_affine_signature, random_circuit, random_clifford_circuit};
use crate::pauli::{clifford_tableau_of, PauliError};
use crate::selftest;
use crate::signature::AffineSignature;

#[derive(Parser, Debug)]
#[command(
    name = "affsig",
    version,
    about = "Exact Clifford circuit simulation on affine signatures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a computational-basis measurement of every qubit.
    Simulate {
        #[arg(short = 'c', long = "circuit")]
        circuit: PathBuf,
        #[arg(long = "in")]
        input: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the exact amplitude <out|U|in>.
    Amplitude {
        #[arg(short = 'c', long = "circuit")]
        circuit: PathBuf,
        #[arg(long = "in")]
        input: String,
        #[arg(long = "out")]
        output: String,
    },
    /// Print the exact probability of a partial measurement outcome.
    Prob {
        #[arg(short = 'c', long = "circuit")]
        circuit: PathBuf,
        #[arg(long = "in")]
        input: String,
        /// Comma-separated `q<i>=<bit>` assignments, e.g. `q0=0,q2=1`.
        #[arg(long)]
        measure: String,
    },
    /// Classify a signature file as singular, unitary, or unitary after rescaling.
    Check {
        #[arg(short = 's', long = "signature")]
        signature: PathBuf,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Print the Clifford tableau of a circuit or signature.
    Tableau {
        #[arg(
            short = 'c',
            long = "circuit",
            conflicts_with = "signature",
            required_unless_present = "signature"
        )]
        circuit: Option<PathBuf>,
        #[arg(short = 's', long = "signature")]
        signature: Option<PathBuf>,
    },
    /// Print a random circuit or signature file.
    Random {
        #[command(subcommand)]
        kind: RandomKind,
    },
    /// Run the randomized invariant suites against the dense oracle.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Time amplitude queries on large random circuits.
    Bench {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum RandomKind {
    /// Random circuit over the full gate set.
    Circuit {
        #[arg(long, default_value_t = 3)]
        qubits: usize,
        #[arg(long, default_value_t = 20)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw only H, P and CNOT.
        #[arg(long)]
        generators_only: bool,
    },
    /// Random canonical affine signature.
    Signature {
        #[arg(long, default_value_t = 4)]
        arity: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Expect {
    Unitary,
    Singular,
}

enum Failure {
    Domain(String),
    Usage(String),
}

type Outcome = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    read(path)?
        .parse()
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_signature(path: &Path) -> Result<AffineSignature, Failure> {
    read(path)?
        .parse()
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_bits(s: &str, n: usize, what: &str) -> Result<BitVec, Failure> {
    let bits: BitVec = s
        .parse()
        .map_err(|_| usage(format!("{what}: {s:?} is not a bit string")))?;
    if bits.len() != n {
        return Err(usage(format!(
            "{what}: expected {n} bits, got {}",
            bits.len()
        )));
    }
    Ok(bits)
}

/// Parses `q0=1,q3=0` (the `q` prefix is optional).
fn parse_measure(s: &str) -> Result<Vec<(usize, bool)>, Failure> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let bad = || {
                usage(format!(
                    "--measure: cannot parse {t:?}, expected q<i>=<bit>"
                ))
            };
            let (q, b) = t.trim().split_once('=').ok_or_else(bad)?;
            let q: usize = q
                .trim()
                .trim_start_matches('q')
                .parse()
                .map_err(|_| bad())?;
            let b = match b.trim() {
                "0" => false,
                "1" => true,
                _ => return Err(bad()),
            };
            Ok((q, b))
        })
        .collect()
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Simulate {
            circuit,
            input,
            seed,
        } => {
            let c = load_circuit(&circuit)?;
            let n = c.num_qubits();
            let input = parse_bits(&input, n, "--in")?;
            let qubits: Vec<usize> = (0..n).collect();
            let bits =
                sample_outcome(&c, &input, &qubits, seed).map_err(|e| usage(e.to_string()))?;
            Ok(BitVec::from_bools(&bits).to_string())
        }
        Command::Amplitude {
            circuit,
            input,
            output,
        } => {
            let c = load_circuit(&circuit)?;
            let n = c.num_qubits();
            let input = parse_bits(&input, n, "--in")?;
            let output = parse_bits(&output, n, "--out")?;
            let a = amplitude(&c, &output, &input).map_err(|e| usage(e.to_string()))?;
            Ok(a.describe())
        }
        Command::Prob {
            circuit,
            input,
            measure,
        } => {
            let c = load_circuit(&circuit)?;
            let input = parse_bits(&input, c.num_qubits(), "--in")?;
            let measured = parse_measure(&measure)?;
            let p =
                marginal_probability(&c, &input, &measured).map_err(|e| usage(e.to_string()))?;
            Ok(p.describe())
        }
        Command::Check { signature, expect } => {
            let f = load_signature(&signature)?;
            if f.arity() % 2 != 0 {
                return Err(usage(format!("signature arity {} is odd", f.arity())));
            }
            let verdict = check_unitary(&f);
            let met = match expect {
                None => true,
                Some(Expect::Unitary) => verdict == UnitaryVerdict::Unitary,
                Some(Expect::Singular) => verdict == UnitaryVerdict::Singular,
            };
            if met {
                Ok(verdict.to_string())
            } else {
                Err(Failure::Domain(verdict.to_string()))
            }
        }
        Command::Tableau { circuit, signature } => {
            let f = match (circuit, signature) {
                (Some(c), _) => circuit_signature(&load_circuit(&c)?),
                (None, Some(s)) => load_signature(&s)?,
                (None, None) => return Err(usage("tableau needs -c or -s")),
            };
            if f.arity() % 2 != 0 {
                return Err(usage(format!("signature arity {} is odd", f.arity())));
            }
            match clifford_tableau_of(&f) {
                Ok(t) => Ok(t.to_string().trim_end().to_string()),
                Err(e @ PauliError::Singular) => Err(Failure::Domain(e.to_string())),
                Err(e) => Err(Failure::Domain(e.to_string())),
            }
        }
        Command::Random { kind } => Ok(match kind {
            RandomKind::Circuit {
                qubits,
                length,
                seed,
                generators_only,
            } => {
                if qubits == 0 {
                    return Err(usage("--qubits must be at least 1"));
                }
                let c = if generators_only {
                    random_clifford_circuit(qubits, length, seed)
                } else {
                    random_circuit(qubits, length, seed)
                };
                c.to_string().trim_end().to_string()
            }
            RandomKind::Signature { arity, seed } => random_affine_signature(arity, seed)
                .to_string()
                .trim_end()
                .to_string(),
        }),
        Command::Selftest { seed } => {
            let reports = selftest::run_all(seed);
            let mut lines = Vec::new();
            let mut failed = false;
            for r in &reports {
                let ms = r.elapsed.as_millis();
                lines.push(match &r.outcome {
                    Ok(k) => format!("ok    {} ({k} trials, {ms} ms)", r.name),
                    Err(e) => {
                        failed = true;
                        format!("FAIL  {} ({ms} ms): {e}", r.name)
                    }
                });
            }
            let text = lines.join("\n");
            if failed {
                Err(Failure::Domain(text))
            } else {
                Ok(text)
            }
        }
        Command::Bench { seed } => {
            let mut lines = Vec::new();
            for n in [25, 50, 100] {
                for gates in [1_000, 10_000] {
                    let c = random_clifford_circuit(n, gates, seed);
                    let zeros = BitVec::zeros(n);
                    let start = Instant::now();
                    amplitude(&c, &zeros, &zeros).map_err(|e| usage(e.to_string()))?;
                    let ms = start.elapsed().as_secs_f64() * 1e3;
                    lines.push(format!("bench n={n} gates={gates} ms={ms:.3}"));
                }
            }
            Ok(lines.join("\n"))
        }
    }
}

/// Runs the CLI on `args` (program name first), writing to the given streams.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            0
        }
        Err(Failure::Domain(text)) => {
            // Verdict-style commands still print their verdict on stdout.
            let _ = writeln!(out, "{text}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

/// Runs the CLI against the process's stdout and stderr.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_lists() {
        let m = parse_measure("q0=0, q1=1").ok().unwrap();
        assert_eq!(m, vec![(0, false), (1, true)]);
        assert_eq!(parse_measure("2=1").ok().unwrap(), vec![(2, true)]);
        assert!(parse_measure("q0").is_err());
        assert!(parse_measure("q0=2").is_err());
        assert!(parse_measure("").ok().unwrap().is_empty());
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run_with(["affsig", "frobnicate"], &mut out, &mut err), 2);
        assert_eq!(
            run_with(
                [
                    "affsig",
                    "amplitude",
                    "-c",
                    "/nonexistent.qc",
                    "--in",
                    "0",
                    "--out",
                    "0"
                ],
                &mut out,
                &mut err
            ),
            2
        );
    }
}
