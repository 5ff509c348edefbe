use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{circuit_signature, Circuit, Gate};
use crate::f2::{BitVec, F2Matrix};
use crate::pauli::PauliOperator;
use crate::signature::{AffineSignature, ExactScalar, QuadraticPhase};

/// Uniform H/P/CNOT circuit. CNOT is only drawn when `n >= 2`.
pub fn random_clifford_circuit(n: usize, length: usize, seed: u64) -> Circuit {
    assert!(n >= 1, "need at least one qubit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = if n >= 2 { 3 } else { 2 };
    let gates = (0..length)
        .map(|_| match rng.gen_range(0..kinds) {
            0 => Gate::H(rng.gen_range(0..n)),
            1 => Gate::P(rng.gen_range(0..n)),
            _ => {
                let c = rng.gen_range(0..n);
                let mut t = rng.gen_range(0..n - 1);
                if t >= c {
                    t += 1;
                }
                Gate::Cnot(c, t)
            }
        })
        .collect();
    Circuit::from_gates(n, gates).expect("generated gates are in range")
}

/// Uniform over all seven gate kinds, macros included. Two-qubit kinds are
/// only drawn when `n >= 2`.
pub fn random_circuit(n: usize, length: usize, seed: u64) -> Circuit {
    assert!(n >= 1, "need at least one qubit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = if n >= 2 { 7 } else { 5 };
    let gates = (0..length)
        .map(|_| {
            let a = rng.gen_range(0..n);
            match rng.gen_range(0..kinds) {
                0 => Gate::H(a),
                1 => Gate::P(a),
                2 => Gate::X(a),
                3 => Gate::Y(a),
                4 => Gate::Z(a),
                k => {
                    let mut b = rng.gen_range(0..n - 1);
                    if b >= a {
                        b += 1;
                    }
                    if k == 5 {
                        Gate::Cnot(a, b)
                    } else {
                        Gate::Cz(a, b)
                    }
                }
            }
        })
        .collect();
    Circuit::from_gates(n, gates).expect("generated gates are in range")
}

/// A random affine signature: support through a random point with a random
/// number of random constraints, uniform phase coefficients, and scalar
/// `2^(p/2) ω^q` with `|p| <= 4`. About one draw in 32 is the zero signature.
pub fn random_affine_signature(arity: usize, seed: u64) -> AffineSignature {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if rng.gen_ratio(1, 32) {
        return AffineSignature::zero(arity);
    }
    let m = rng.gen_range(0..=arity);
    let point = BitVec::from_bools(&(0..arity).map(|_| rng.gen()).collect::<Vec<bool>>());
    let rows: Vec<BitVec> = (0..m)
        .map(|_| BitVec::from_bools(&(0..arity).map(|_| rng.gen()).collect::<Vec<bool>>()))
        .collect();
    let rhs = BitVec::from_bools(&rows.iter().map(|r| r.dot(&point)).collect::<Vec<_>>());
    let diag = (0..arity).map(|_| rng.gen_range(0..4u8)).collect();
    let mut cross = F2Matrix::zeros(arity, arity);
    for j in 0..arity {
        for l in 0..j {
            if rng.gen() {
                cross.set(j, l, true);
                cross.set(l, j, true);
            }
        }
    }
    let scalar = ExactScalar::new(rng.gen_range(-4..=4), rng.gen_range(0..8));
    AffineSignature::from_parts(
        scalar,
        &F2Matrix::from_rows(arity, rows),
        &rhs,
        QuadraticPhase::from_parts(diag, cross),
    )
}

/// The signature of a random Clifford circuit on `n` qubits.
pub fn random_unitary_signature(n: usize, length: usize, seed: u64) -> AffineSignature {
    circuit_signature(&random_clifford_circuit(n, length, seed))
}

/// A uniformly random Pauli operator, phase included.
pub fn random_pauli(n: usize, seed: u64) -> PauliOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = BitVec::from_bools(&(0..n).map(|_| rng.gen()).collect::<Vec<bool>>());
    let r = BitVec::from_bools(&(0..n).map(|_| rng.gen()).collect::<Vec<bool>>());
    PauliOperator::new(e, r, rng.gen_range(0..4))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_deterministic() {
        assert!(random_clifford_circuit(3, 0, 7).gates().is_empty());
        assert_eq!(
            random_clifford_circuit(3, 40, 7),
            random_clifford_circuit(3, 40, 7)
        );
        assert_eq!(
            random_affine_signature(6, 11),
            random_affine_signature(6, 11)
        );
    }

    #[test]
    fn affine_samples_are_canonical() {
        for seed in 0..100 {
            let f = random_affine_signature(4, seed);
            f.check_invariants()
                .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        }
    }
}
