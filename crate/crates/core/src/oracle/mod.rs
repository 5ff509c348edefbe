//! Brute-force dense-matrix references and seeded fuzz generators.
//!
//! Nothing here touches the affine-signature machinery: matrices are built
//! from the textbook gate displays and multiplied out, so every check that
//! compares against this module is an independent cross-validation.

mod dense;
mod random;

pub use dense::DenseMatrix;
pub use random::{
    random_affine_signature, random_circuit, random_clifford_circuit, random_pauli,
    random_unitary_signature,
};

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::f2::BitVec;
use crate::pauli::PauliOperator;

/// Largest qubit count the dense oracle accepts.
pub const DENSE_QUBIT_LIMIT: usize = 10;
/// Tolerance for cross-checks between the exact and dense routes.
pub const CROSS_CHECK_TOL: f64 = 1e-9;
/// Tolerance for literal-matrix fidelity.
pub const LITERAL_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("dense oracle limited to {limit} qubits, got {n}")]
    DenseLimitExceeded { n: usize, limit: usize },
}

fn check_limit(n: usize) -> Result<(), OracleError> {
    if n > DENSE_QUBIT_LIMIT {
        Err(OracleError::DenseLimitExceeded {
            n,
            limit: DENSE_QUBIT_LIMIT,
        })
    } else {
        Ok(())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The textbook 1- or 2-qubit matrix for a gate, before embedding.
pub fn literal_matrix(g: &Gate) -> DenseMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match g {
        Gate::H(_) => DenseMatrix::from_rows(&[&[c(h, 0.0), c(h, 0.0)], &[c(h, 0.0), c(-h, 0.0)]]),
        Gate::P(_) => DenseMatrix::from_rows(&[&[l, o], &[o, i]]),
        Gate::X(_) => DenseMatrix::from_rows(&[&[o, l], &[l, o]]),
        Gate::Y(_) => DenseMatrix::from_rows(&[&[o, -i], &[i, o]]),
        Gate::Z(_) => DenseMatrix::from_rows(&[&[l, o], &[o, -l]]),
        Gate::Cnot(..) => {
            DenseMatrix::from_rows(&[&[l, o, o, o], &[o, l, o, o], &[o, o, o, l], &[o, o, l, o]])
        }
        Gate::Cz(..) => {
            DenseMatrix::from_rows(&[&[l, o, o, o], &[o, l, o, o], &[o, o, l, o], &[o, o, o, -l]])
        }
    }
}

/// The gate's literal matrix embedded into `n` qubits, qubit 0 most significant.
pub fn dense_gate(g: &Gate, n: usize) -> Result<DenseMatrix, OracleError> {
    check_limit(n)?;
    let mut m = DenseMatrix::identity(1 << n);
    m.apply_local(&literal_matrix(g), &g.qubits());
    Ok(m)
}

/// `G_last ⋯ G_first` for the circuit's gates in time order.
pub fn dense_circuit(c: &Circuit) -> Result<DenseMatrix, OracleError> {
    let n = c.num_qubits();
    check_limit(n)?;
    let mut m = DenseMatrix::identity(1 << n);
    for g in c.gates() {
        m.apply_local(&literal_matrix(g), &g.qubits());
    }
    Ok(m)
}

/// The column `U |input⟩` of the dense circuit matrix.
pub fn dense_state(c: &Circuit, input: &BitVec) -> Result<Vec<Complex64>, OracleError> {
    let m = dense_circuit(c)?;
    let col = input.to_uint_be() as usize;
    Ok((0..m.dim()).map(|r| m.get(r, col)).collect())
}

/// A Pauli operator's matrix built entrywise from
/// `P(x, y) = i^c · [x ⊕ y = e] · (−1)^{r·x}`.
pub fn dense_pauli(p: &PauliOperator) -> Result<DenseMatrix, OracleError> {
    let n = p.num_qubits();
    check_limit(n)?;
    let e = p.x_part().to_uint_be() as usize;
    let r = p.z_part().to_uint_be() as usize;
    let base = Complex64::i().powu(p.phase_exponent() as u32);
    let mut m = DenseMatrix::zeros(1 << n);
    for x in 0..1usize << n {
        let sign = if (x & r).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        m.set(x, x ^ e, base * sign);
    }
    Ok(m)
}

pub fn dense_is_unitary(m: &DenseMatrix, tol: f64) -> bool {
    m.unitarity_defect() <= tol
}

/// Recovers `(e, r, c)` if `m` is a phased Pauli matrix.
pub fn dense_in_pauli_group(m: &DenseMatrix, tol: f64) -> Option<PauliOperator> {
    let n = m.num_qubits();
    let d = m.dim();
    let e = (0..d).find(|&y| m.get(0, y).norm() > 0.5)?;
    let v0 = m.get(0, e);
    let c = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]
        .iter()
        .position(|&u| (u - v0).norm() <= tol)?;
    let mut r = 0usize;
    for j in 0..n {
        let x = 1usize << (n - 1 - j);
        let ratio = m.get(x, x ^ e) / v0;
        if (ratio + 1.0).norm() <= tol {
            r |= x;
        }
    }
    let candidate = PauliOperator::new(
        BitVec::from_uint_be(e as u64, n),
        BitVec::from_uint_be(r as u64, n),
        c as u8,
    );
    let expected = dense_pauli(&candidate).ok()?;
    (expected.max_abs_diff(m) <= tol).then_some(candidate)
}

/// Whether `U σ U*` is a Pauli for every generator `σ ∈ {X_j, Z_j}`.
pub fn dense_is_clifford(m: &DenseMatrix, tol: f64) -> bool {
    let n = m.num_qubits();
    if n > 5 || !dense_is_unitary(m, tol) {
        return false;
    }
    let adj = m.adjoint();
    (0..n).all(|j| {
        [PauliOperator::x(j, n), PauliOperator::z(j, n)]
            .iter()
            .all(|sigma| {
                let s = dense_pauli(sigma).expect("n <= 5");
                dense_in_pauli_group(&(&(m * &s) * &adj), tol).is_some()
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliKind;

    #[test]
    fn hadamard_literal() {
        let h = dense_gate(&Gate::H(0), 1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h.get(1, 1) - c(-s, 0.0)).norm() < LITERAL_TOL);
        assert!((h.get(0, 1) - c(s, 0.0)).norm() < LITERAL_TOL);
    }

    #[test]
    fn embedding_is_kronecker() {
        let h = dense_gate(&Gate::H(0), 1).unwrap();
        let hi = dense_gate(&Gate::H(0), 2).unwrap();
        assert!(hi.max_abs_diff(&h.kron(&DenseMatrix::identity(2))) < LITERAL_TOL);
        let ih = dense_gate(&Gate::H(1), 2).unwrap();
        assert!(ih.max_abs_diff(&DenseMatrix::identity(2).kron(&h)) < LITERAL_TOL);
        let cx = dense_gate(&Gate::Cnot(0, 1), 2).unwrap();
        assert!(cx.max_abs_diff(&literal_matrix(&Gate::Cnot(0, 1))) < LITERAL_TOL);
    }

    #[test]
    fn reversed_cnot_embedding() {
        // Control on qubit 1, target on qubit 0: |01> -> |11>.
        let m = dense_gate(&Gate::Cnot(1, 0), 2).unwrap();
        assert!((m.get(0b11, 0b01) - c(1.0, 0.0)).norm() < LITERAL_TOL);
        assert!((m.get(0b10, 0b10) - c(1.0, 0.0)).norm() < LITERAL_TOL);
    }

    #[test]
    fn circuit_products() {
        let empty = Circuit::new(2);
        assert!(
            dense_circuit(&empty)
                .unwrap()
                .max_abs_diff(&DenseMatrix::identity(4))
                < LITERAL_TOL
        );
        let hh = Circuit::from_gates(1, vec![Gate::H(0), Gate::H(0)]).unwrap();
        assert!(
            dense_circuit(&hh)
                .unwrap()
                .max_abs_diff(&DenseMatrix::identity(2))
                < LITERAL_TOL
        );
        let ghz = Circuit::from_gates(2, vec![Gate::H(0), Gate::Cnot(0, 1)]).unwrap();
        let psi = dense_state(&ghz, &"00".parse().unwrap()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [s, 0.0, 0.0, s];
        for (a, b) in psi.iter().zip(expect) {
            assert!((a - c(b, 0.0)).norm() < LITERAL_TOL);
        }
    }

    #[test]
    fn verdicts_on_h_y_t() {
        let h = dense_gate(&Gate::H(0), 1).unwrap();
        assert!(dense_is_unitary(&h, CROSS_CHECK_TOL));
        assert!(dense_in_pauli_group(&h, CROSS_CHECK_TOL).is_none());
        assert!(dense_is_clifford(&h, CROSS_CHECK_TOL));

        let y = dense_gate(&Gate::Y(0), 1).unwrap();
        let p = dense_in_pauli_group(&y, CROSS_CHECK_TOL).unwrap();
        assert_eq!(p, PauliOperator::single(PauliKind::Y, 0, 1));

        let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let t = DenseMatrix::from_rows(&[&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), w]]);
        assert!(dense_is_unitary(&t, CROSS_CHECK_TOL));
        assert!(!dense_is_clifford(&t, CROSS_CHECK_TOL));
    }

    #[test]
    fn dense_limit() {
        assert!(matches!(
            dense_gate(&Gate::H(0), 11),
            Err(OracleError::DenseLimitExceeded { .. })
        ));
    }

    #[test]
    fn numerical_rank() {
        assert_eq!(DenseMatrix::identity(4).rank(1e-6), 4);
        let mut m = DenseMatrix::zeros(2);
        m.set(0, 0, c(1.0, 0.0));
        m.set(1, 0, c(0.0, 1.0));
        assert_eq!(m.rank(1e-6), 1);
    }
}
