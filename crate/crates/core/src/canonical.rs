//! Nonsingular normal form of arity-`2n` signatures and the exact unitarity
//! test built on it.
//!
//! A signature is put in the form
//!
//! ```text
//! f(x, y', y'') = μ · χ_{y'' = A x + B y' + b} · i^{C1(x) + C2(y') + 2 y'ᵀ C3 x}
//! ```
//!
//! where `x` are the row variables, `y'` the free column variables and `y''`
//! the column variables fixed by the support. If the support pins a row
//! variable the matrix is singular. Otherwise `M_f` is nonsingular iff the
//! square F2 matrix `[A; C3]` is, and unitary iff additionally
//! `|μ|² · 2^{|y'|} = 1`.

use std::fmt;

use thiserror::Error;

use crate::f2::{is_nonsingular, BitVec, F2Matrix};
use crate::signature::{reduce, AffineSignature, ExactScalar, QuadraticPhase};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonicalError {
    #[error("signature is singular: {0}")]
    SingularDetected(String),
    #[error("expected an even arity, got {0}")]
    OddArity(usize),
}

/// The decomposition described in the module docs. Column qubit `q` is
/// variable `2n-1-q` of the signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonsingularForm {
    pub n: usize,
    pub scalar: ExactScalar,
    /// Column qubits that stay free, ascending.
    pub free_cols: Vec<usize>,
    /// Column qubits fixed by the support, one per row of `a`.
    pub pivot_cols: Vec<usize>,
    /// `(n - r) × n`: dependence of the pivot columns on the row variables.
    pub a: F2Matrix,
    /// `(n - r) × r`: dependence of the pivot columns on the free columns.
    pub b: F2Matrix,
    pub rhs: BitVec,
    /// Phase on the row variables.
    pub c1: QuadraticPhase,
    /// Phase on the free column variables, indexed like `free_cols`.
    pub c2: QuadraticPhase,
    /// `r × n`: bilinear coupling between free columns and rows.
    pub c3: F2Matrix,
}

impl NonsingularForm {
    /// Number of free column variables.
    pub fn free_count(&self) -> usize {
        self.free_cols.len()
    }

    /// `[A; C3]`, an `n × n` matrix over F2.
    pub fn cf_matrix(&self) -> F2Matrix {
        self.a.stack(&self.c3)
    }

    /// Rebuilds the signature this form was extracted from.
    pub fn to_signature(&self) -> AffineSignature {
        let n = self.n;
        let k = 2 * n;
        let col_var = |q: usize| k - 1 - q;
        let rows: Vec<BitVec> = (0..self.pivot_cols.len())
            .map(|i| {
                let mut row = self.a.row(i).embed(k, 0);
                row.set(col_var(self.pivot_cols[i]), true);
                for (t, &q) in self.free_cols.iter().enumerate() {
                    if self.b.get(i, t) {
                        row.set(col_var(q), true);
                    }
                }
                row
            })
            .collect();
        let mut phase = QuadraticPhase::zero(k);
        for j in 0..n {
            phase.add_diag(j, self.c1.diag(j));
            for l in j + 1..n {
                if self.c1.cross(j, l) {
                    phase.toggle_cross(j, l);
                }
            }
        }
        for (s, &qs) in self.free_cols.iter().enumerate() {
            phase.add_diag(col_var(qs), self.c2.diag(s));
            for (t, &qt) in self.free_cols.iter().enumerate().skip(s + 1) {
                if self.c2.cross(s, t) {
                    phase.toggle_cross(col_var(qs), col_var(qt));
                }
            }
            for j in 0..n {
                if self.c3.get(s, j) {
                    phase.toggle_cross(col_var(qs), j);
                }
            }
        }
        AffineSignature::from_parts(self.scalar, &F2Matrix::from_rows(k, rows), &self.rhs, phase)
    }
}

/// Reduces `f` with column variables preferred as pivots. Fails if `f` is
/// zero or some row variable is forced to be a pivot.
pub fn extract_form(f: &AffineSignature) -> Result<NonsingularForm, CanonicalError> {
    let k = f.arity();
    if !k.is_multiple_of(2) {
        return Err(CanonicalError::OddArity(k));
    }
    let n = k / 2;
    if f.is_zero() {
        return Err(CanonicalError::SingularDetected("zero signature".into()));
    }
    let order: Vec<usize> = (n..k).rev().chain(0..n).collect();
    let sup = f.support();
    let red = reduce(
        f.scalar(),
        sup.constraints().row_slice().to_vec(),
        sup.rhs().clone(),
        f.phase().clone(),
        &order,
    )
    .expect("a canonical nonzero signature has a feasible support");
    if let Some(&p) = red.pivots.iter().find(|&&p| p < n) {
        return Err(CanonicalError::SingularDetected(format!(
            "row variable {p} is determined by the support"
        )));
    }
    let qubit = |v: usize| k - 1 - v;
    let pivot_cols: Vec<usize> = red.pivots.iter().map(|&v| qubit(v)).collect();
    let free_cols: Vec<usize> = (0..n).filter(|q| !pivot_cols.contains(q)).collect();
    let free_vars: Vec<usize> = free_cols.iter().map(|&q| k - 1 - q).collect();
    let x_vars: Vec<usize> = (0..n).collect();

    let a = F2Matrix::from_rows(n, red.rows.iter().map(|r| r.select(&x_vars)).collect());
    let b = F2Matrix::from_rows(
        free_vars.len(),
        red.rows.iter().map(|r| r.select(&free_vars)).collect(),
    );
    let restrict = |vars: &[usize]| {
        let diag = vars.iter().map(|&v| red.phase.diag(v)).collect();
        let mut cross = F2Matrix::zeros(vars.len(), vars.len());
        for (s, &u) in vars.iter().enumerate() {
            for (t, &v) in vars.iter().enumerate() {
                cross.set(s, t, red.phase.cross(u, v));
            }
        }
        QuadraticPhase::from_parts(diag, cross)
    };
    let c3 = F2Matrix::from_rows(
        n,
        free_vars
            .iter()
            .map(|&v| red.phase.cross_row(v).select(&x_vars))
            .collect(),
    );
    Ok(NonsingularForm {
        n,
        scalar: red.scalar,
        c1: restrict(&x_vars),
        c2: restrict(&free_vars),
        free_cols,
        pivot_cols,
        a,
        b,
        rhs: red.rhs,
        c3,
    })
}

/// Outcome of the exact unitarity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitaryVerdict {
    Singular,
    /// Nonsingular; replacing the scalar's `p` by the given value makes it unitary.
    UnitaryAfterScaling(i32),
    Unitary,
}

impl fmt::Display for UnitaryVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitaryVerdict::Singular => f.write_str("singular"),
            UnitaryVerdict::UnitaryAfterScaling(p) => write!(f, "unitary-after-scaling p={p}"),
            UnitaryVerdict::Unitary => f.write_str("unitary"),
        }
    }
}

pub fn check_unitary(f: &AffineSignature) -> UnitaryVerdict {
    let form = match extract_form(f) {
        Ok(form) => form,
        Err(_) => return UnitaryVerdict::Singular,
    };
    if !is_nonsingular(&form.cf_matrix()) {
        return UnitaryVerdict::Singular;
    }
    let target = -(form.free_count() as i32);
    if f.scalar().p() == target {
        UnitaryVerdict::Unitary
    } else {
        UnitaryVerdict::UnitaryAfterScaling(target)
    }
}

/// Rescales a nonsingular signature to a unitary one, keeping its phase `q`.
pub fn unitarize(f: &AffineSignature) -> Result<AffineSignature, CanonicalError> {
    match check_unitary(f) {
        UnitaryVerdict::Singular => Err(CanonicalError::SingularDetected(
            "no rescaling makes a singular matrix unitary".into(),
        )),
        UnitaryVerdict::Unitary => Ok(f.clone()),
        UnitaryVerdict::UnitaryAfterScaling(p) => Ok(f.with_scalar(f.scalar().with_p(p))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gate_signature, Gate};
    use crate::oracle::random_unitary_signature;

    #[test]
    fn generator_forms() {
        let h = extract_form(&AffineSignature::hadamard()).unwrap();
        assert_eq!((h.n, h.free_count()), (1, 1));
        assert_eq!(h.c3, F2Matrix::from_strs(&["1"]));
        assert_eq!(h.a.rows(), 0);

        let p = extract_form(&AffineSignature::phase_gate()).unwrap();
        assert_eq!(p.free_count(), 0);
        assert_eq!(p.a, F2Matrix::from_strs(&["1"]));
        assert_eq!(p.c1.diag(0), 1);

        let cx = extract_form(&AffineSignature::cnot()).unwrap();
        assert_eq!(cx.free_count(), 0);
        assert_eq!(cx.pivot_cols, vec![0, 1]);
        assert_eq!(cx.a, F2Matrix::from_strs(&["10", "11"]));
    }

    #[test]
    fn verdicts_on_generators() {
        for s in [
            AffineSignature::hadamard(),
            AffineSignature::phase_gate(),
            AffineSignature::cnot(),
            AffineSignature::identity(3),
        ] {
            assert_eq!(check_unitary(&s), UnitaryVerdict::Unitary);
        }
        let doubled = AffineSignature::hadamard().scaled(ExactScalar::sqrt2_pow(2));
        assert_eq!(
            check_unitary(&doubled),
            UnitaryVerdict::UnitaryAfterScaling(-1)
        );
        assert_eq!(unitarize(&doubled).unwrap(), AffineSignature::hadamard());
        assert_eq!(
            UnitaryVerdict::UnitaryAfterScaling(-1).to_string(),
            "unitary-after-scaling p=-1"
        );
    }

    #[test]
    fn singular_examples() {
        // |0><0| projector: row variable pinned.
        let proj = AffineSignature::point(&"00".parse().unwrap());
        assert_eq!(check_unitary(&proj), UnitaryVerdict::Singular);
        // All-ones 2x2 matrix: rank one, no constraints but C3 = 0.
        let ones = AffineSignature::constant(2, ExactScalar::ONE);
        assert_eq!(check_unitary(&ones), UnitaryVerdict::Singular);
        assert_eq!(
            check_unitary(&AffineSignature::zero(4)),
            UnitaryVerdict::Singular
        );
        assert!(unitarize(&ones).is_err());
    }

    #[test]
    fn form_round_trips() {
        for seed in 0..60 {
            let f = random_unitary_signature(1 + seed as usize % 4, 12, seed);
            let form = extract_form(&f).unwrap();
            assert_eq!(form.to_signature(), f, "seed {seed}");
            assert!(is_nonsingular(&form.cf_matrix()));
        }
        let g = gate_signature(&Gate::Cz(0, 2), 3);
        assert_eq!(extract_form(&g).unwrap().to_signature(), g);
    }
}
