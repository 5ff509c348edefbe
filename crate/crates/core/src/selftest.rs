//! Randomized end-to-end checks of every module against the dense oracle.
//!
//! Each check returns the number of trials it ran or a description of the
//! first failure. The `selftest` command and the acceptance suite both run
//! these.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canonical::{check_unitary, extract_form, unitarize, UnitaryVerdict};
use crate::circuit::{
    circuit_signature, circuit_signature_by_compose, gate_signature, marginal_probability, Circuit,
    Gate, Probability,
};
use crate::f2::{is_nonsingular, BitVec, F2Matrix};
use crate::oracle::{
    dense_circuit, dense_pauli, dense_state, literal_matrix, random_affine_signature,
    random_circuit, random_clifford_circuit, CROSS_CHECK_TOL, LITERAL_TOL,
};
use crate::pauli::{clifford_tableau_of, PauliOperator};
use crate::signature::{AffineSignature, ExactScalar, QuadraticPhase};

pub type CheckResult = Result<usize, String>;

fn fail<T>(msg: String) -> Result<T, String> {
    Err(msg)
}

fn random_scalar(rng: &mut ChaCha8Rng) -> ExactScalar {
    ExactScalar::new(rng.gen_range(-6..=6), rng.gen_range(0..8))
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> BitVec {
    BitVec::from_bools(&(0..n).map(|_| rng.gen()).collect::<Vec<bool>>())
}

fn all_points(k: usize) -> impl Iterator<Item = BitVec> {
    (0..1u64 << k).map(move |v| BitVec::from_uint_be(v, k))
}

/// H, P and CNOT signatures against their textbook matrices, entrywise.
pub fn generator_fidelity() -> CheckResult {
    let cases = [(Gate::H(0), 1), (Gate::P(0), 1), (Gate::Cnot(0, 1), 2)];
    for (g, n) in cases {
        let m = gate_signature(&g, n)
            .signature_matrix()
            .map_err(|e| e.to_string())?;
        let d = m.max_abs_diff(&literal_matrix(&g));
        if d > LITERAL_TOL {
            return fail(format!("{g}: deviation {d:e}"));
        }
    }
    Ok(cases.len())
}

/// Circuit signatures (both lowerings) against dense products.
pub fn composition_vs_dense(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let n = rng.gen_range(1..=4);
        let len = rng.gen_range(0..=20);
        let c = random_circuit(n, len, rng.gen());
        let fast = circuit_signature(&c);
        // Y lowers to iY, so the dense product picks up one factor of i per Y.
        let ys = c.gates().iter().filter(|g| matches!(g, Gate::Y(_))).count();
        let expect = dense_circuit(&c)
            .map_err(|e| e.to_string())?
            .scale(Complex64::i().powu(ys as u32));
        let d = fast
            .signature_matrix()
            .map_err(|e| e.to_string())?
            .max_abs_diff(&expect);
        if d > CROSS_CHECK_TOL {
            return fail(format!("trial {t}: deviation {d:e} for\n{c}"));
        }
        if fast != circuit_signature_by_compose(&c) {
            return fail(format!("trial {t}: lowerings disagree for\n{c}"));
        }
    }
    Ok(trials)
}

fn close(a: ExactScalar, b: Complex64) -> bool {
    (a.to_complex() - b).norm() <= 1e-10
}

/// Every closure operation against exhaustive pointwise evaluation, plus
/// canonical-form invariants on every output.
pub fn closure_pointwise(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let k = rng.gen_range(1..=10);
        let f = random_affine_signature(k, rng.gen());
        let ctx = |op: &str, e: String| format!("trial {t} ({op}, arity {k}): {e}\n{f}");
        f.check_invariants().map_err(|e| ctx("input", e))?;

        // tensor
        let kg = rng.gen_range(0..=10 - k);
        let g = random_affine_signature(kg, rng.gen());
        let fg = f.tensor(&g);
        fg.check_invariants().map_err(|e| ctx("tensor", e))?;
        for x in all_points(k + kg) {
            let left = BitVec::from_bools(&x.to_bools()[..k]);
            let right = BitVec::from_bools(&x.to_bools()[k..]);
            let want = (f.evaluate(&left) * g.evaluate(&right)).to_complex();
            if !close(fg.evaluate(&x), want) {
                return fail(ctx("tensor", format!("mismatch at {x}")));
            }
        }

        // permute
        let mut sigma: Vec<usize> = (0..k).collect();
        sigma.shuffle(&mut rng);
        let fp = f.permute(&sigma);
        fp.check_invariants().map_err(|e| ctx("permute", e))?;
        for x in all_points(k) {
            let y = BitVec::from_bools(&(0..k).map(|i| x.get(sigma[i])).collect::<Vec<_>>());
            if fp.evaluate(&x) != f.evaluate(&y) {
                return fail(ctx("permute", format!("mismatch at {x} with {sigma:?}")));
            }
        }

        // marginalize and pin
        let j = rng.gen_range(0..k);
        let fm = f.marginalize(j);
        fm.check_invariants().map_err(|e| ctx("marginalize", e))?;
        let bit = rng.gen();
        let fpin = f.pin(j, bit);
        fpin.check_invariants().map_err(|e| ctx("pin", e))?;
        for x in all_points(k - 1) {
            let with = |b: bool| {
                let mut y = x.clone();
                y.insert(j, b);
                y
            };
            let want = f.evaluate(&with(false)).to_complex() + f.evaluate(&with(true)).to_complex();
            if !close(fm.evaluate(&x), want) {
                return fail(ctx("marginalize", format!("mismatch at {x}, j={j}")));
            }
            if fpin.evaluate(&x) != f.evaluate(&with(bit)) {
                return fail(ctx("pin", format!("mismatch at {x}, j={j}")));
            }
        }

        // identify
        if k >= 2 {
            let j = rng.gen_range(0..k);
            let mut l = rng.gen_range(0..k - 1);
            if l >= j {
                l += 1;
            }
            let fi = f.identify(j, l);
            fi.check_invariants().map_err(|e| ctx("identify", e))?;
            for x in all_points(k - 1) {
                let mut y = x.clone();
                let src = if l > j { l - 1 } else { l };
                y.insert(j, x.get(src));
                if fi.evaluate(&x) != f.evaluate(&y) {
                    return fail(ctx("identify", format!("mismatch at {x}, ({j}, {l})")));
                }
            }
        }

        // conjugate
        let fc = f.conjugate();
        fc.check_invariants().map_err(|e| ctx("conjugate", e))?;
        for x in all_points(k) {
            if fc.evaluate(&x) != f.evaluate(&x).conj() {
                return fail(ctx("conjugate", format!("mismatch at {x}")));
            }
        }
    }
    Ok(trials)
}

/// Rescaled circuit signatures: unitarize, then check `UU* = I` densely and
/// `[A; C3]` nonsingular over F2.
pub fn unitarize_random(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let n = rng.gen_range(1..=4);
        let len = rng.gen_range(0..=20);
        let c = random_clifford_circuit(n, len, rng.gen());
        let f = circuit_signature(&c).scaled(random_scalar(&mut rng));
        let u = unitarize(&f).map_err(|e| format!("trial {t}: {e}\n{c}"))?;
        let defect = u
            .signature_matrix()
            .map_err(|e| e.to_string())?
            .unitarity_defect();
        if defect > CROSS_CHECK_TOL {
            return fail(format!("trial {t}: ‖UU* − I‖ = {defect:e}\n{c}"));
        }
        let form = extract_form(&u).map_err(|e| format!("trial {t}: {e}"))?;
        if !is_nonsingular(&form.cf_matrix()) {
            return fail(format!("trial {t}: cf matrix singular\n{c}"));
        }
        if check_unitary(&u) != UnitaryVerdict::Unitary {
            return fail(format!(
                "trial {t}: unitarized signature not reported unitary"
            ));
        }
    }
    Ok(trials)
}

/// `|0⟩⟨0|` on `qubit`, identity elsewhere.
fn projector(n: usize, qubit: usize) -> AffineSignature {
    let k = 2 * n;
    let mut rows: Vec<BitVec> = (0..n)
        .map(|i| {
            let mut r = BitVec::unit(k, i);
            r.set(k - 1 - i, true);
            r
        })
        .collect();
    rows.push(BitVec::unit(k, qubit));
    AffineSignature::from_parts(
        ExactScalar::ONE,
        &F2Matrix::from_rows(k, rows),
        &BitVec::zeros(n + 1),
        QuadraticPhase::zero(k),
    )
}

/// Dense numerical rank against the exact verdict, on a mix of circuit
/// signatures, generic random signatures, and circuits spoiled by a projector.
pub fn nonsingularity_agreement(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut singular_seen = 0;
    for t in 0..trials {
        let n = rng.gen_range(1..=3);
        let f = match t % 3 {
            0 => circuit_signature(&random_clifford_circuit(
                n,
                rng.gen_range(0..=20),
                rng.gen(),
            ))
            .scaled(random_scalar(&mut rng)),
            1 => random_affine_signature(2 * n, rng.gen()),
            _ => {
                let u = circuit_signature(&random_clifford_circuit(n, 10, rng.gen()));
                let v = circuit_signature(&random_clifford_circuit(n, 10, rng.gen()));
                let pr = projector(n, rng.gen_range(0..n));
                u.compose(&pr)
                    .and_then(|x| x.compose(&v))
                    .map_err(|e| e.to_string())?
            }
        };
        let m = f.signature_matrix().map_err(|e| e.to_string())?;
        let dense_ok = m.rank(1e-6) == m.dim();
        let verdict = check_unitary(&f);
        if dense_ok != (verdict != UnitaryVerdict::Singular) {
            return fail(format!(
                "trial {t}: dense rank {} vs verdict {verdict}\n{f}",
                m.rank(1e-6)
            ));
        }
        singular_seen += usize::from(!dense_ok);
    }
    if trials >= 30 && singular_seen == 0 {
        return fail("no singular cases were generated".into());
    }
    Ok(trials)
}

/// Tableaux of random unitaries against dense `U σ U*`.
pub fn tableau_vs_dense(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let n = rng.gen_range(1..=4);
        let c = random_clifford_circuit(n, rng.gen_range(0..=20), rng.gen());
        let f = circuit_signature(&c).scaled(random_scalar(&mut rng));
        let tab = clifford_tableau_of(&f).map_err(|e| format!("trial {t}: {e}\n{c}"))?;
        if !tab.is_symplectic() {
            return fail(format!("trial {t}: tableau not symplectic\n{tab}"));
        }
        let u = unitarize(&f)
            .map_err(|e| e.to_string())?
            .signature_matrix()
            .map_err(|e| e.to_string())?;
        let ua = u.adjoint();
        for j in 0..n {
            for (sigma, img) in [
                (PauliOperator::x(j, n), &tab.x_images[j]),
                (PauliOperator::z(j, n), &tab.z_images[j]),
            ] {
                let s = dense_pauli(&sigma).map_err(|e| e.to_string())?;
                let conj = &(&u * &s) * &ua;
                let d = conj.max_abs_diff(&dense_pauli(img).map_err(|e| e.to_string())?);
                if d > CROSS_CHECK_TOL {
                    return fail(format!("trial {t}: image of {sigma} off by {d:e}\n{c}"));
                }
            }
        }
    }
    Ok(trials)
}

/// Closes `{H, P}` under composition modulo global phase; returns the group
/// size after checking that every element is exactly unitary.
pub fn one_qubit_clifford_count() -> CheckResult {
    let strip = |s: &AffineSignature| s.with_scalar(ExactScalar::new(s.scalar().p(), 0));
    let gens = [AffineSignature::hadamard(), AffineSignature::phase_gate()];
    let mut seen: HashSet<AffineSignature> = gens.iter().map(strip).collect();
    let mut frontier: Vec<AffineSignature> = gens.to_vec();
    while let Some(f) = frontier.pop() {
        for g in &gens {
            let h = g.compose(&f).map_err(|e| e.to_string())?;
            if seen.insert(strip(&h)) {
                frontier.push(h);
            }
        }
    }
    for s in &seen {
        if check_unitary(s) != UnitaryVerdict::Unitary {
            return fail(format!("element not unitary:\n{s}"));
        }
    }
    Ok(seen.len())
}

/// Exact marginals against dense `|ψ|²` sums, and exact normalization.
pub fn probability_law(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let n = rng.gen_range(1..=3);
        let c = random_clifford_circuit(n, rng.gen_range(0..=20), rng.gen());
        let input = random_bits(&mut rng, n);
        let psi = dense_state(&c, &input).map_err(|e| e.to_string())?;
        let mut qubits: Vec<usize> = (0..n).filter(|_| rng.gen()).collect();
        qubits.shuffle(&mut rng);
        let measured: Vec<(usize, bool)> = qubits.iter().map(|&q| (q, rng.gen())).collect();
        let p =
            marginal_probability(&c, &input, &measured).map_err(|e| format!("trial {t}: {e}"))?;
        let want: f64 = psi
            .iter()
            .enumerate()
            .filter(|(x, _)| {
                measured
                    .iter()
                    .all(|&(q, b)| ((x >> (n - 1 - q)) & 1 == 1) == b)
            })
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if (p.to_f64() - want).abs() > CROSS_CHECK_TOL {
            return fail(format!("trial {t}: {p} vs dense {want}\n{c}"));
        }
        // Full outcomes, summed exactly as dyadic rationals over 2^63.
        let mut total: u128 = 0;
        for x in 0..1usize << n {
            let full: Vec<(usize, bool)> =
                (0..n).map(|q| (q, (x >> (n - 1 - q)) & 1 == 1)).collect();
            match marginal_probability(&c, &input, &full).map_err(|e| e.to_string())? {
                Probability::Zero => {}
                Probability::PowerOfTwo(s) if s <= 63 => total += 1u128 << (63 - s),
                other => return fail(format!("trial {t}: implausible probability {other}")),
            }
        }
        if total != 1u128 << 63 {
            return fail(format!(
                "trial {t}: full outcomes sum to {total} / 2^63\n{c}"
            ));
        }
    }
    Ok(trials)
}

pub fn circuit_format_round_trip(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let c = random_circuit(rng.gen_range(1..=8), rng.gen_range(0..=40), rng.gen());
        let text = c.to_string();
        let back: Circuit = text
            .parse()
            .map_err(|e| format!("trial {t}: {e}\n{text}"))?;
        if back != c || back.to_string() != text {
            return fail(format!("trial {t}: round trip changed\n{text}"));
        }
    }
    Ok(trials)
}

pub fn signature_format_round_trip(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let f = random_affine_signature(rng.gen_range(0..=10), rng.gen());
        let text = f.to_string();
        let back: AffineSignature = text
            .parse()
            .map_err(|e| format!("trial {t}: {e}\n{text}"))?;
        if back != f || back.to_string() != text {
            return fail(format!("trial {t}: round trip changed\n{text}"));
        }
    }
    Ok(trials)
}

pub struct CheckReport {
    pub name: &'static str,
    pub outcome: CheckResult,
    pub elapsed: Duration,
}

fn timed(name: &'static str, f: impl FnOnce() -> CheckResult) -> CheckReport {
    let start = Instant::now();
    let outcome = f();
    CheckReport {
        name,
        outcome,
        elapsed: start.elapsed(),
    }
}

/// Runs every check with its default trial count.
pub fn run_all(seed: u64) -> Vec<CheckReport> {
    vec![
        timed("generator fidelity", generator_fidelity),
        timed("composition vs dense", || composition_vs_dense(200, seed)),
        timed("closure pointwise", || closure_pointwise(500, seed)),
        timed("unitarize", || unitarize_random(300, seed)),
        timed("nonsingularity agreement", || {
            nonsingularity_agreement(300, seed)
        }),
        timed("tableau vs dense", || tableau_vs_dense(500, seed)),
        timed("one-qubit clifford group", || {
            one_qubit_clifford_count().and_then(|k| {
                if k == 24 {
                    Ok(k)
                } else {
                    Err(format!("expected 24 elements, found {k}"))
                }
            })
        }),
        timed("probability law", || probability_law(200, seed)),
        timed("circuit format round trip", || {
            circuit_format_round_trip(100, seed)
        }),
        timed("signature format round trip", || {
            signature_format_round_trip(100, seed)
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_checks_pass() {
        assert_eq!(generator_fidelity(), Ok(3));
        assert_eq!(composition_vs_dense(20, 1), Ok(20));
        assert_eq!(closure_pointwise(30, 2), Ok(30));
        assert_eq!(unitarize_random(20, 3), Ok(20));
        assert_eq!(nonsingularity_agreement(30, 4), Ok(30));
        assert_eq!(tableau_vs_dense(20, 5), Ok(20));
        assert_eq!(one_qubit_clifford_count(), Ok(24));
        assert_eq!(probability_law(20, 6), Ok(20));
        assert_eq!(circuit_format_round_trip(20, 7), Ok(20));
        assert_eq!(signature_format_round_trip(20, 8), Ok(20));
    }

    #[test]
    fn projector_is_rank_deficient() {
        let m = projector(2, 1).signature_matrix().unwrap();
        assert_eq!(m.rank(1e-6), 2);
    }
}
