//! Phased Pauli operators in `(e, r, c)` form, their affine signatures, and
//! Clifford tableaux computed by exact conjugation.
//!
//! `P(x, y) = i^c · (−1)^{r·x} · [x ⊕ y = e]`, i.e. `P = i^c · Z^r X^e`.
//! Single-qubit letters: `X = (1, 0, 0)`, `Z = (0, 1, 0)`, `Y = (1, 1, 3)`.

use std::fmt;

use thiserror::Error;

use crate::canonical::{check_unitary, unitarize, UnitaryVerdict};
use crate::f2::BitVec;
use crate::signature::{AffineSignature, ExactScalar, QuadraticPhase};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("not a Pauli operator: {reason}")]
    NotPauli { reason: String },
    #[error("conjugation requires a nonsingular operator")]
    Singular,
    #[error("operator is not unitary; rescale to p={0} first")]
    NeedsScaling(i32),
    #[error("internal theorem violation: {0}")]
    InternalTheoremViolation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
}

impl PauliKind {
    fn letter(self) -> char {
        match self {
            PauliKind::I => 'I',
            PauliKind::X => 'X',
            PauliKind::Y => 'Y',
            PauliKind::Z => 'Z',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    e: BitVec,
    r: BitVec,
    c: u8,
}

impl PauliOperator {
    pub fn new(e: BitVec, r: BitVec, c: u8) -> Self {
        assert_eq!(e.len(), r.len(), "x and z parts must have equal length");
        PauliOperator { e, r, c: c % 4 }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(BitVec::zeros(n), BitVec::zeros(n), 0)
    }

    /// `kind` on qubit `j`, identity elsewhere, with the letter's own phase.
    pub fn single(kind: PauliKind, j: usize, n: usize) -> Self {
        let mut p = Self::identity(n);
        match kind {
            PauliKind::I => {}
            PauliKind::X => p.e.set(j, true),
            PauliKind::Z => p.r.set(j, true),
            PauliKind::Y => {
                p.e.set(j, true);
                p.r.set(j, true);
                p.c = 3;
            }
        }
        p
    }

    pub fn x(j: usize, n: usize) -> Self {
        Self::single(PauliKind::X, j, n)
    }

    pub fn z(j: usize, n: usize) -> Self {
        Self::single(PauliKind::Z, j, n)
    }

    pub fn num_qubits(&self) -> usize {
        self.e.len()
    }

    pub fn x_part(&self) -> &BitVec {
        &self.e
    }

    pub fn z_part(&self) -> &BitVec {
        &self.r
    }

    pub fn phase_exponent(&self) -> u8 {
        self.c
    }

    pub fn kind(&self, j: usize) -> PauliKind {
        match (self.e.get(j), self.r.get(j)) {
            (false, false) => PauliKind::I,
            (true, false) => PauliKind::X,
            (false, true) => PauliKind::Z,
            (true, true) => PauliKind::Y,
        }
    }

    /// The exponent `s` in `P = i^s · σ_1 ⊗ … ⊗ σ_n` with Hermitian letters.
    pub fn letter_phase(&self) -> u8 {
        (self.c as usize + self.e.and_count(&self.r)) as u8 % 4
    }

    pub fn is_hermitian(&self) -> bool {
        self.letter_phase().is_multiple_of(2)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &PauliOperator) -> PauliOperator {
        assert_eq!(self.num_qubits(), other.num_qubits());
        let c = self.c + other.c + 2 * other.r.dot(&self.e) as u8;
        PauliOperator::new(self.e.xor(&other.e), self.r.xor(&other.r), c)
    }

    pub fn commutes(&self, other: &PauliOperator) -> bool {
        other.r.dot(&self.e) == self.r.dot(&other.e)
    }

    /// The arity-`2n` signature of this operator.
    pub fn to_signature(&self) -> AffineSignature {
        let n = self.num_qubits();
        let k = 2 * n;
        let rows: Vec<BitVec> = (0..n)
            .map(|i| {
                let mut row = BitVec::unit(k, i);
                row.set(k - 1 - i, true);
                row
            })
            .collect();
        let mut phase = QuadraticPhase::zero(k);
        for i in self.r.iter_ones() {
            phase.add_diag(i, 2);
        }
        AffineSignature::from_parts(
            ExactScalar::i_pow(self.c as i64),
            &crate::f2::F2Matrix::from_rows(k, rows),
            &self.e,
            phase,
        )
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.letter_phase() as usize])?;
        for j in 0..self.num_qubits() {
            write!(f, "{}", self.kind(j).letter())?;
        }
        Ok(())
    }
}

fn not_pauli(reason: impl Into<String>) -> PauliError {
    PauliError::NotPauli {
        reason: reason.into(),
    }
}

/// Writes `f = μ · P` with `P` a phased Pauli and `μ = 2^{p/2} ω^{0|1}`.
pub fn recognize_pauli(f: &AffineSignature) -> Result<(PauliOperator, ExactScalar), PauliError> {
    let k = f.arity();
    if !k.is_multiple_of(2) {
        return Err(not_pauli(format!("odd arity {k}")));
    }
    if f.is_zero() {
        return Err(not_pauli("zero signature"));
    }
    let n = k / 2;
    let sup = f.support();
    if sup.num_constraints() != n {
        return Err(not_pauli("support is not a permutation graph"));
    }
    // Canonical pivots are x_0..x_{n-1}; each row must read x_i + y_i.
    for i in 0..n {
        let mut expect = BitVec::unit(k, i);
        expect.set(k - 1 - i, true);
        if sup.pivots()[i] != i || sup.constraints().row(i) != &expect {
            return Err(not_pauli(format!(
                "row {i} does not couple qubit {i} to itself"
            )));
        }
    }
    let phase = f.phase();
    if !phase.cross_matrix().is_zero() {
        return Err(not_pauli("phase has cross terms"));
    }
    let e = sup.rhs().clone();
    let mut r = BitVec::zeros(n);
    for i in 0..n {
        match phase.diag(k - 1 - i) {
            0 => {}
            2 => r.set(i, true),
            d => return Err(not_pauli(format!("diagonal coefficient {d} on qubit {i}"))),
        }
    }
    // Written over the column variables the phase picks up i^{2 r·e}.
    let s = f.scalar() * ExactScalar::i_pow(2 * r.dot(&e) as i64);
    let c = s.q() / 2;
    let residual = ExactScalar::new(s.p(), (s.q() % 2) as i64);
    Ok((PauliOperator::new(e, r, c), residual))
}

/// `U P U*` as a signature; `U` must be exactly unitary.
pub fn conjugate_by(u: &AffineSignature, p: &PauliOperator) -> Result<AffineSignature, PauliError> {
    match check_unitary(u) {
        UnitaryVerdict::Singular => return Err(PauliError::Singular),
        UnitaryVerdict::UnitaryAfterScaling(q) => return Err(PauliError::NeedsScaling(q)),
        UnitaryVerdict::Unitary => {}
    }
    let up = u
        .compose(&p.to_signature())
        .map_err(|e| not_pauli(e.to_string()))?;
    up.compose(&u.adjoint())
        .map_err(|e| not_pauli(e.to_string()))
}

/// Images of `X_j` and `Z_j` under conjugation by a Clifford unitary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordTableau {
    pub x_images: Vec<PauliOperator>,
    pub z_images: Vec<PauliOperator>,
}

impl CliffordTableau {
    pub fn num_qubits(&self) -> usize {
        self.x_images.len()
    }

    /// Whether the images are Hermitian and obey the canonical commutation
    /// relations of the generators they replace.
    pub fn is_symplectic(&self) -> bool {
        let n = self.num_qubits();
        let all_hermitian = self
            .x_images
            .iter()
            .chain(&self.z_images)
            .all(PauliOperator::is_hermitian);
        all_hermitian
            && (0..n).all(|j| {
                (0..n).all(|l| {
                    self.x_images[j].commutes(&self.x_images[l])
                        && self.z_images[j].commutes(&self.z_images[l])
                        && self.x_images[j].commutes(&self.z_images[l]) == (j != l)
                })
            })
    }
}

impl fmt::Display for CliffordTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, images) in [('X', &self.x_images), ('Z', &self.z_images)] {
            for (j, img) in images.iter().enumerate() {
                writeln!(f, "{label}{} -> {img}", j + 1)?;
            }
        }
        Ok(())
    }
}

/// Computes the tableau of a nonsingular signature, rescaling it to unitary
/// first. Each image must come out as an exact Pauli with unit residual.
pub fn clifford_tableau_of(u: &AffineSignature) -> Result<CliffordTableau, PauliError> {
    let u = unitarize(u).map_err(|_| PauliError::Singular)?;
    let n = u.arity() / 2;
    let image = |p: PauliOperator| -> Result<PauliOperator, PauliError> {
        let conj = conjugate_by(&u, &p)?;
        let (img, residual) = recognize_pauli(&conj).map_err(|e| {
            PauliError::InternalTheoremViolation(format!("image of {p} is not Pauli: {e}"))
        })?;
        if residual != ExactScalar::ONE {
            return Err(PauliError::InternalTheoremViolation(format!(
                "image of {p} carries residual scalar {residual}"
            )));
        }
        Ok(img)
    };
    Ok(CliffordTableau {
        x_images: (0..n)
            .map(|j| image(PauliOperator::x(j, n)))
            .collect::<Result<_, _>>()?,
        z_images: (0..n)
            .map(|j| image(PauliOperator::z(j, n)))
            .collect::<Result<_, _>>()?,
    })
}
