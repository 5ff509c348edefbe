use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{circuit_signature, Circuit};
use crate::f2::BitVec;
use crate::signature::{AffineSignature, ExactScalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimulationError {
    #[error("expected a {expected}-bit basis state, got {got} bits")]
    BasisLength { expected: usize, got: usize },
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

/// An exact measurement probability: `0` or `2^-s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Probability {
    Zero,
    PowerOfTwo(u32),
}

impl Probability {
    pub const ONE: Probability = Probability::PowerOfTwo(0);

    pub fn from_scalar(s: ExactScalar) -> Result<Self, SimulationError> {
        if s.is_zero() {
            return Ok(Probability::Zero);
        }
        if s.q() != 0 || s.p() % 2 != 0 || s.p() > 0 {
            return Err(SimulationError::InternalInvariantViolation(format!(
                "probability {s} is not of the form 2^-s"
            )));
        }
        Ok(Probability::PowerOfTwo((-s.p() / 2) as u32))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Probability::Zero => 0.0,
            Probability::PowerOfTwo(s) => (-(s as f64)).exp2(),
        }
    }

    /// The ring form followed by a decimal approximation, `0` for zero.
    pub fn describe(&self) -> String {
        match self {
            Probability::Zero => "0".to_string(),
            Probability::PowerOfTwo(_) => format!("{self}  (≈ {:.10})", self.to_f64()),
        }
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probability::Zero => f.write_str("0"),
            Probability::PowerOfTwo(s) => write!(f, "2^-{s}"),
        }
    }
}

fn check_basis(bits: &BitVec, n: usize) -> Result<(), SimulationError> {
    if bits.len() != n {
        return Err(SimulationError::BasisLength {
            expected: n,
            got: bits.len(),
        });
    }
    Ok(())
}

/// `⟨output| U |input⟩`, exactly.
pub fn amplitude(
    c: &Circuit,
    output: &BitVec,
    input: &BitVec,
) -> Result<ExactScalar, SimulationError> {
    let n = c.num_qubits();
    check_basis(output, n)?;
    check_basis(input, n)?;
    let mut x = output.clone();
    for q in (0..n).rev() {
        x.push(input.get(q));
    }
    Ok(circuit_signature(c).evaluate(&x))
}

/// The arity-`n` signature of `U |input⟩`; variable `q` is qubit `q`.
pub fn output_state(c: &Circuit, input: &BitVec) -> Result<AffineSignature, SimulationError> {
    let n = c.num_qubits();
    check_basis(input, n)?;
    let mut psi = circuit_signature(c);
    for q in 0..n {
        psi.pin_in_place(2 * n - 1 - q, input.get(q));
    }
    Ok(psi)
}

/// `x ↦ |ψ(x)|²` as a signature: `ψ ⊗ ψ̄` with each pair of copies identified.
fn diagonal_density(psi: &AffineSignature) -> AffineSignature {
    let n = psi.arity();
    let mut rho = psi.tensor(&psi.conjugate());
    for q in (0..n).rev() {
        rho.identify_in_place(n + q, q);
    }
    rho
}

fn validate_qubits(qubits: &[usize], n: usize) -> Result<(), SimulationError> {
    let mut seen = vec![false; n];
    for &q in qubits {
        if q >= n {
            return Err(SimulationError::QubitOutOfRange { qubit: q, n });
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(SimulationError::DuplicateQubit(q));
        }
    }
    Ok(())
}

fn total(mut rho: AffineSignature) -> Result<Probability, SimulationError> {
    while rho.arity() > 0 {
        rho.marginalize_in_place(0);
    }
    Probability::from_scalar(rho.scalar())
}

/// `Pr[qubits measured in the computational basis read outcome]` for the
/// state `U |input⟩`; unlisted qubits are summed out.
pub fn marginal_probability(
    c: &Circuit,
    input: &BitVec,
    measured: &[(usize, bool)],
) -> Result<Probability, SimulationError> {
    let n = c.num_qubits();
    let qubits: Vec<usize> = measured.iter().map(|&(q, _)| q).collect();
    validate_qubits(&qubits, n)?;
    let mut rho = diagonal_density(&output_state(c, input)?);
    let pins: BTreeMap<usize, bool> = measured.iter().copied().collect();
    for (&q, &bit) in pins.iter().rev() {
        rho.pin_in_place(q, bit);
    }
    total(rho)
}

/// Draws a joint outcome for `qubits` (in the order given) by the chain rule
/// on exact marginals. Every conditional is 0, 1/2 or 1.
pub fn sample_outcome(
    c: &Circuit,
    input: &BitVec,
    qubits: &[usize],
    seed: u64,
) -> Result<Vec<bool>, SimulationError> {
    let n = c.num_qubits();
    validate_qubits(qubits, n)?;
    let mut rho = diagonal_density(&output_state(c, input)?);
    // Sum out unmeasured qubits, then bring the measured ones into order.
    let mut keep: Vec<usize> = (0..n).collect();
    for q in (0..n).rev() {
        if !qubits.contains(&q) {
            rho.marginalize_in_place(q);
            keep.remove(q);
        }
    }
    let sigma: Vec<usize> = keep
        .iter()
        .map(|q| {
            qubits
                .iter()
                .position(|x| x == q)
                .expect("kept qubit is measured")
        })
        .collect();
    let mut rho = rho.permute(&sigma);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prefix = total(rho.clone())?;
    let mut out = Vec::with_capacity(qubits.len());
    for _ in qubits {
        let p0 = total(rho.pin(0, false))?;
        let ratio = match (p0, prefix) {
            (Probability::Zero, _) => 0.0,
            (Probability::PowerOfTwo(a), Probability::PowerOfTwo(b)) if a == b => 1.0,
            (Probability::PowerOfTwo(a), Probability::PowerOfTwo(b)) if a == b + 1 => 0.5,
            _ => {
                return Err(SimulationError::InternalInvariantViolation(format!(
                    "conditional {p0} / {prefix} is not 0, 1/2 or 1"
                )))
            }
        };
        let bit = !rng.gen_bool(ratio);
        rho.pin_in_place(0, bit);
        prefix = if bit { total(rho.clone())? } else { p0 };
        out.push(bit);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn bits(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn bell_pair() {
        let c = Circuit::from_gates(2, vec![Gate::H(0), Gate::Cnot(0, 1)]).unwrap();
        let a = amplitude(&c, &bits("11"), &bits("00")).unwrap();
        assert_eq!(a, ExactScalar::new(-1, 0));
        assert_eq!(
            amplitude(&c, &bits("01"), &bits("00")).unwrap(),
            ExactScalar::ZERO
        );
        let z = bits("00");
        assert_eq!(
            marginal_probability(&c, &z, &[(0, true)]).unwrap(),
            Probability::PowerOfTwo(1)
        );
        assert_eq!(
            marginal_probability(&c, &z, &[(0, true), (1, false)]).unwrap(),
            Probability::Zero
        );
        assert_eq!(marginal_probability(&c, &z, &[]).unwrap(), Probability::ONE);
        for seed in 0..20 {
            let s = sample_outcome(&c, &z, &[1, 0], seed).unwrap();
            assert_eq!(s[0], s[1]);
        }
    }

    #[test]
    fn probability_formatting() {
        assert_eq!(Probability::Zero.describe(), "0");
        assert_eq!(
            Probability::PowerOfTwo(1).describe(),
            "2^-1  (≈ 0.5000000000)"
        );
        assert!(Probability::from_scalar(ExactScalar::new(-1, 0)).is_err());
        assert!(Probability::from_scalar(ExactScalar::new(0, 2)).is_err());
    }

    #[test]
    fn bad_queries() {
        let c = Circuit::new(2);
        assert!(matches!(
            marginal_probability(&c, &bits("00"), &[(2, true)]),
            Err(SimulationError::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            marginal_probability(&c, &bits("00"), &[(1, true), (1, false)]),
            Err(SimulationError::DuplicateQubit(1))
        ));
        assert!(amplitude(&c, &bits("0"), &bits("00")).is_err());
    }

    #[test]
    fn sampling_is_seeded() {
        let c = Circuit::from_gates(3, vec![Gate::H(0), Gate::H(1), Gate::H(2)]).unwrap();
        let z = bits("000");
        let a = sample_outcome(&c, &z, &[0, 1, 2], 5).unwrap();
        assert_eq!(a, sample_outcome(&c, &z, &[0, 1, 2], 5).unwrap());
        let distinct: std::collections::HashSet<_> = (0..64)
            .map(|s| sample_outcome(&c, &z, &[2, 0], s).unwrap())
            .collect();
        assert_eq!(distinct.len(), 4);
    }
}
