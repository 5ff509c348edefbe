//! Affine signatures `λ · χ_{Ax=b} · i^{Q(x)}` and their closure operations.
//!
//! Every [`AffineSignature`] is kept in a canonical form: the support is in
//! reduced row-echelon form with pivots chosen left to right, and the phase
//! only mentions free (non-pivot) variables. Under that normalization two
//! signatures are equal as functions iff they are structurally equal.
//!
//! The closure operations (tensor, permute, identify, marginalize) are
//! implemented incrementally so that a single gate contraction costs
//! `O(k²/64)` word operations for arity `k`, rather than a fresh elimination.

mod format;
mod phase;
mod scalar;
mod support;

pub use format::FormatError;
pub use phase::QuadraticPhase;
pub use scalar::{format_complex, ExactScalar};
pub use support::AffineSupport;

use thiserror::Error;

use crate::f2::{eliminate, BitVec, F2Matrix};
use crate::oracle::DenseMatrix;

/// Default ceiling on `n` for [`AffineSignature::signature_matrix`].
pub const DEFAULT_DENSE_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("dense export of {n} qubits exceeds the limit of {limit}")]
    DenseLimitExceeded { n: usize, limit: usize },
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineSignature {
    arity: usize,
    scalar: ExactScalar,
    support: AffineSupport,
    phase: QuadraticPhase,
}

/// Support and phase reduced against an arbitrary pivot order.
#[derive(Clone, Debug)]
pub(crate) struct Reduced {
    pub rows: Vec<BitVec>,
    pub rhs: BitVec,
    pub pivots: Vec<usize>,
    pub phase: QuadraticPhase,
    pub scalar: ExactScalar,
}

/// Row-reduces `rows · x = rhs` with pivots taken in `order`, then substitutes
/// each pivot variable out of the phase. Returns `None` if infeasible.
pub(crate) fn reduce(
    scalar: ExactScalar,
    mut rows: Vec<BitVec>,
    mut rhs: BitVec,
    mut phase: QuadraticPhase,
    order: &[usize],
) -> Option<Reduced> {
    let pivots = eliminate(&mut rows, Some(&mut rhs), order);
    let rank = pivots.len();
    if (rank..rows.len()).any(|r| rhs.get(r)) {
        return None;
    }
    rows.truncate(rank);
    let rhs = rhs.select(&(0..rank).collect::<Vec<_>>());
    let mut scalar = scalar;
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    for (r, &col) in pivot_cols.iter().enumerate() {
        let mut expr = rows[r].clone();
        expr.set(col, false);
        let c = phase.substitute(col, &expr, rhs.get(r));
        scalar *= ExactScalar::i_pow(c as i64);
    }
    Some(Reduced {
        rows,
        rhs,
        pivots: pivot_cols,
        phase,
        scalar,
    })
}

impl AffineSignature {
    /// The identically-zero function of the given arity.
    pub fn zero(arity: usize) -> Self {
        AffineSignature {
            arity,
            scalar: ExactScalar::ZERO,
            support: AffineSupport::full(arity),
            phase: QuadraticPhase::zero(arity),
        }
    }

    /// The constant function `scalar` on all of `{0,1}^arity`.
    pub fn constant(arity: usize, scalar: ExactScalar) -> Self {
        if scalar.is_zero() {
            return Self::zero(arity);
        }
        AffineSignature {
            arity,
            scalar,
            support: AffineSupport::full(arity),
            phase: QuadraticPhase::zero(arity),
        }
    }

    /// `scalar · χ_{constraints·x = rhs} · i^{phase(x)}`, canonicalized. The
    /// constraints may be redundant, unreduced, or inconsistent (giving zero),
    /// and the phase may mention any variable.
    pub fn from_parts(
        scalar: ExactScalar,
        constraints: &F2Matrix,
        rhs: &BitVec,
        phase: QuadraticPhase,
    ) -> Self {
        let arity = phase.arity();
        assert_eq!(
            constraints.cols(),
            arity,
            "constraint width must equal arity"
        );
        assert_eq!(constraints.rows(), rhs.len(), "one rhs bit per constraint");
        if scalar.is_zero() {
            return Self::zero(arity);
        }
        let order: Vec<usize> = (0..arity).collect();
        match reduce(
            scalar,
            constraints.row_slice().to_vec(),
            rhs.clone(),
            phase,
            &order,
        ) {
            None => Self::zero(arity),
            Some(r) => AffineSignature {
                arity,
                scalar: r.scalar,
                support: AffineSupport {
                    constraints: F2Matrix::from_rows(arity, r.rows),
                    rhs: r.rhs,
                    pivots: r.pivots,
                },
                phase: r.phase,
            },
        }
    }

    /// Builds `λ · χ_{Ax=b} · i^{Σ_j [⟨α_j, x⟩ + c_j]}`, where each bracket is
    /// a 0/1 indicator evaluated over F2 and the outer sum is taken mod 4.
    ///
    /// Each indicator is replaced by the square of its integer linear form,
    /// which agrees with it mod 4 and has even cross terms.
    pub fn from_linear_form(
        arity: usize,
        lambda: ExactScalar,
        a: &F2Matrix,
        b: &BitVec,
        alphas: &[(BitVec, bool)],
    ) -> Self {
        let mut phase = QuadraticPhase::zero(arity);
        let mut scalar = lambda;
        for (alpha, c) in alphas {
            assert_eq!(alpha.len(), arity, "linear form length must equal arity");
            let k = phase.add_square(alpha, *c, 1);
            scalar *= ExactScalar::i_pow(k as i64);
        }
        Self::from_parts(scalar, a, b, phase)
    }

    /// The point indicator `δ_bits`.
    pub fn point(bits: &BitVec) -> Self {
        let k = bits.len();
        Self::from_parts(
            ExactScalar::ONE,
            &F2Matrix::identity(k),
            bits,
            QuadraticPhase::zero(k),
        )
    }

    /// `χ_{x_1 = x_2 = … = x_k}`.
    pub fn equality(arity: usize) -> Self {
        let rows = (1..arity)
            .map(|j| {
                let mut r = BitVec::unit(arity, 0);
                r.set(j, true);
                r
            })
            .collect();
        Self::from_parts(
            ExactScalar::ONE,
            &F2Matrix::from_rows(arity, rows),
            &BitVec::zeros(arity.saturating_sub(1)),
            QuadraticPhase::zero(arity),
        )
    }

    /// The arity-`2n` signature whose matrix is the identity.
    pub fn identity(n: usize) -> Self {
        let k = 2 * n;
        let rows = (0..n)
            .map(|i| {
                let mut r = BitVec::unit(k, i);
                r.set(k - 1 - i, true);
                r
            })
            .collect();
        Self::from_parts(
            ExactScalar::ONE,
            &F2Matrix::from_rows(k, rows),
            &BitVec::zeros(n),
            QuadraticPhase::zero(k),
        )
    }

    /// `H(x₁, x₂) = 2^{-1/2} · i^{2 x₁ x₂}`.
    pub fn hadamard() -> Self {
        let mut phase = QuadraticPhase::zero(2);
        phase.toggle_cross(0, 1);
        Self::from_parts(
            ExactScalar::sqrt2_pow(-1),
            &F2Matrix::zeros(0, 2),
            &BitVec::zeros(0),
            phase,
        )
    }

    /// `P(x₁, x₂) = χ_{x₁ = x₂} · i^{x₁²}`.
    pub fn phase_gate() -> Self {
        let mut phase = QuadraticPhase::zero(2);
        phase.add_diag(0, 1);
        Self::from_parts(
            ExactScalar::ONE,
            &F2Matrix::from_strs(&["11"]),
            &BitVec::zeros(1),
            phase,
        )
    }

    /// `CNOT(x₁, x₂, x₃, x₄) = χ_{x₁ = x₄ = x₂ + x₃}`.
    pub fn cnot() -> Self {
        Self::from_parts(
            ExactScalar::ONE,
            &F2Matrix::from_strs(&["1001", "1110"]),
            &BitVec::zeros(2),
            QuadraticPhase::zero(4),
        )
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn scalar(&self) -> ExactScalar {
        self.scalar
    }

    #[inline]
    pub fn support(&self) -> &AffineSupport {
        &self.support
    }

    #[inline]
    pub fn phase(&self) -> &QuadraticPhase {
        &self.phase
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    /// Multiplies by a ring scalar.
    pub fn scaled(&self, s: ExactScalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.arity);
        }
        let mut out = self.clone();
        out.scalar *= s;
        out
    }

    /// Replaces the scalar; zero yields the zero signature.
    pub fn with_scalar(&self, s: ExactScalar) -> Self {
        if s.is_zero() || self.is_zero() {
            return Self::zero(self.arity);
        }
        let mut out = self.clone();
        out.scalar = s;
        out
    }

    pub fn evaluate(&self, x: &BitVec) -> ExactScalar {
        assert_eq!(x.len(), self.arity, "input length must equal arity");
        if self.is_zero() || !self.support.contains(x) {
            return ExactScalar::ZERO;
        }
        self.scalar * ExactScalar::i_pow(self.phase.evaluate(x) as i64)
    }

    /// `(f ⊗ g)(x, y) = f(x) · g(y)`.
    pub fn tensor(&self, other: &AffineSignature) -> Self {
        let mut out = self.clone();
        out.tensor_in_place(other);
        out
    }

    /// Variable relabeling: the result evaluated at `x` equals `f` evaluated at
    /// `(x_{σ(0)}, …, x_{σ(k-1)})`, i.e. variable `i` of `f` becomes variable
    /// `sigma[i]` of the result.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        let k = self.arity;
        assert_eq!(sigma.len(), k, "permutation length must equal arity");
        let mut seen = vec![false; k];
        for &s in sigma {
            assert!(s < k && !seen[s], "sigma is not a permutation");
            seen[s] = true;
        }
        if self.is_zero() {
            return Self::zero(k);
        }
        let rows: Vec<BitVec> = self
            .support
            .constraints
            .row_slice()
            .iter()
            .map(|r| {
                let mut out = BitVec::zeros(k);
                for c in r.iter_ones() {
                    out.set(sigma[c], true);
                }
                out
            })
            .collect();
        let m = F2Matrix::from_rows(k, rows);
        Self::from_parts(
            self.scalar,
            &m,
            &self.support.rhs,
            self.phase.permuted(sigma),
        )
    }

    /// `f` with `x_j := x_l`, dropping variable `j` (arity decreases by one).
    pub fn identify(&self, j: usize, l: usize) -> Self {
        assert!(
            j != l && j < self.arity && l < self.arity,
            "bad identify({j}, {l})"
        );
        let mut out = self.clone();
        out.identify_in_place(j, l);
        out
    }

    /// `Σ_{x_j ∈ {0,1}} f`, dropping variable `j`.
    pub fn marginalize(&self, j: usize) -> Self {
        assert!(j < self.arity, "marginalize index {j} out of range");
        let mut out = self.clone();
        out.marginalize_in_place(j);
        out
    }

    /// Contracts variable `j` with the point signature `δ_bit`, i.e. fixes
    /// `x_j = bit` and drops it.
    pub fn pin(&self, j: usize, bit: bool) -> Self {
        assert!(j < self.arity, "pin index {j} out of range");
        let mut out = self.clone();
        out.pin_in_place(j, bit);
        out
    }

    /// Pointwise complex conjugate.
    pub fn conjugate(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        AffineSignature {
            arity: self.arity,
            scalar: self.scalar.conj(),
            support: self.support.clone(),
            phase: self.phase.conjugate(),
        }
    }

    /// The signature whose matrix is the conjugate transpose of this one's.
    ///
    /// Row variables `x_1..x_n` and column variables `x_{2n}..x_{n+1}` trade
    /// places, which is a full reversal of the variable order.
    pub fn adjoint(&self) -> Self {
        assert!(
            self.arity.is_multiple_of(2),
            "adjoint requires even arity, got {}",
            self.arity
        );
        let k = self.arity;
        let reversal: Vec<usize> = (0..k).rev().collect();
        self.conjugate().permute(&reversal)
    }

    /// Sequential composition with `M_result = M_self · M_other`, realized as
    /// tensor, `n` identifications and `n` marginalizations.
    pub fn compose(&self, other: &AffineSignature) -> Result<Self, SignatureError> {
        if self.arity != other.arity {
            return Err(SignatureError::ArityMismatch(self.arity, other.arity));
        }
        assert!(self.arity.is_multiple_of(2), "compose requires even arity");
        let n = self.arity / 2;
        let mut t = self.tensor(other);
        // y_k (always at index 2n once y_1..y_{k-1} are gone) joins x_{2n+1-k}.
        for k in 1..=n {
            t.identify_in_place(2 * n, 2 * n - k);
        }
        for _ in 0..n {
            t.marginalize_in_place(n);
        }
        Ok(t)
    }

    /// Equality modulo a unit-modulus global phase: everything but `q` agrees.
    pub fn eq_mod_phase(&self, other: &AffineSignature) -> bool {
        self.phase_class_key() == other.phase_class_key()
    }

    /// A hashable key identifying the signature up to a global `ω^q`.
    pub fn phase_class_key(&self) -> (usize, bool, i32, &AffineSupport, &QuadraticPhase) {
        (
            self.arity,
            self.is_zero(),
            self.scalar.p(),
            &self.support,
            &self.phase,
        )
    }

    /// `M_f` under the default dense limit.
    pub fn signature_matrix(&self) -> Result<DenseMatrix, SignatureError> {
        self.signature_matrix_with_limit(DEFAULT_DENSE_LIMIT)
    }

    /// `M_f[row][col] = f(x)` where the row index is `(x_1, …, x_n)` read
    /// big-endian and the column index is `(x_{2n}, …, x_{n+1})`, note the
    /// reversal.
    pub fn signature_matrix_with_limit(&self, limit: usize) -> Result<DenseMatrix, SignatureError> {
        assert!(
            self.arity.is_multiple_of(2),
            "signature matrix requires even arity"
        );
        let n = self.arity / 2;
        if n > limit {
            return Err(SignatureError::DenseLimitExceeded { n, limit });
        }
        let mut m = DenseMatrix::zeros(1 << n);
        if self.is_zero() {
            return Ok(m);
        }
        for x in self.support.solutions().enumerate() {
            let (row, col) = matrix_index(&x, n);
            let v = self.scalar * ExactScalar::i_pow(self.phase.evaluate(&x) as i64);
            m.set(row, col, v.to_complex());
        }
        Ok(m)
    }

    /// Checks every canonical-form invariant.
    pub fn check_invariants(&self) -> Result<(), String> {
        let k = self.arity;
        if self.support.arity() != k || self.phase.arity() != k {
            return Err("component arities disagree".into());
        }
        if self.is_zero() {
            if self.scalar != ExactScalar::ZERO
                || self.support.num_constraints() != 0
                || !self.phase.is_zero()
            {
                return Err("zero signature is not in canonical zero form".into());
            }
            return Ok(());
        }
        self.support.check()?;
        let cross = self.phase.cross_matrix();
        for j in 0..k {
            if self.phase.diag(j) > 3 {
                return Err(format!("diag[{j}] out of range"));
            }
            if cross.get(j, j) {
                return Err(format!("cross[{j}][{j}] set"));
            }
            for l in 0..j {
                if cross.get(j, l) != cross.get(l, j) {
                    return Err(format!("cross not symmetric at ({j}, {l})"));
                }
            }
        }
        for &p in &self.support.pivots {
            if self.phase.involves(p) {
                return Err(format!("phase mentions pivot variable {p}"));
            }
        }
        Ok(())
    }

    // In-place building blocks. Each preserves the canonical form.

    fn make_zero(&mut self) {
        *self = Self::zero(self.arity);
    }

    /// Appends `other`'s variables after this signature's.
    pub(crate) fn tensor_in_place(&mut self, other: &AffineSignature) {
        let offset = self.arity;
        let k = offset + other.arity;
        if self.is_zero() || other.is_zero() {
            self.arity = k;
            self.make_zero();
            return;
        }
        let sup = &mut self.support;
        sup.constraints.extend_cols(other.arity);
        for r in other.support.constraints.row_slice() {
            sup.constraints.push_row(r.embed(k, offset));
        }
        for i in 0..other.support.rhs.len() {
            sup.rhs.push(other.support.rhs.get(i));
        }
        sup.pivots
            .extend(other.support.pivots.iter().map(|p| p + offset));
        self.phase.append(&other.phase);
        self.scalar *= other.scalar;
        self.arity = k;
    }

    /// Intersects the support with `row · x = bit`.
    pub(crate) fn add_constraint(&mut self, mut row: BitVec, mut bit: bool) {
        if self.is_zero() {
            return;
        }
        let sup = &mut self.support;
        for (i, &p) in sup.pivots.iter().enumerate() {
            if row.get(p) {
                row.xor_assign(sup.constraints.row(i));
                bit ^= sup.rhs.get(i);
            }
        }
        let Some(p) = row.first_one() else {
            if bit {
                self.make_zero();
            }
            return;
        };
        for i in 0..sup.pivots.len() {
            if sup.constraints.get(i, p) {
                sup.constraints.row_mut(i).xor_assign(&row);
                if bit {
                    sup.rhs.toggle(i);
                }
            }
        }
        let at = sup.pivots.partition_point(|&q| q < p);
        sup.pivots.insert(at, p);
        sup.rhs.insert(at, bit);
        let mut expr = row.clone();
        expr.set(p, false);
        sup.constraints.insert_row(at, row);
        let c = self.phase.substitute(p, &expr, bit);
        self.scalar *= ExactScalar::i_pow(c as i64);
    }

    /// Deletes variable `j`, which must appear in neither support nor phase.
    fn remove_var(&mut self, j: usize) {
        self.support.constraints.remove_col(j);
        for p in &mut self.support.pivots {
            debug_assert_ne!(*p, j);
            if *p > j {
                *p -= 1;
            }
        }
        self.phase.remove_var(j);
        self.arity -= 1;
    }

    /// Sums out a variable that some constraint determines.
    fn drop_determined(&mut self, j: usize) {
        let sup = &mut self.support;
        let r = match sup.pivot_row(j) {
            Some(r) => r,
            None => {
                // Exchange j with the largest pivot among the rows containing
                // it; later pivots would break the leading-one property of
                // the earlier rows.
                let r = (0..sup.pivots.len())
                    .rev()
                    .find(|&r| sup.constraints.get(r, j))
                    .expect("drop_determined on an undetermined variable");
                let mut expr = sup.constraints.row(r).clone();
                expr.set(j, false);
                let b = sup.rhs.get(r);
                for i in 0..sup.pivots.len() {
                    if i != r && sup.constraints.get(i, j) {
                        sup.constraints.xor_rows(i, r);
                        if b {
                            sup.rhs.toggle(i);
                        }
                    }
                }
                let c = self.phase.substitute(j, &expr, b);
                self.scalar *= ExactScalar::i_pow(c as i64);
                r
            }
        };
        let sup = &mut self.support;
        sup.constraints.remove_row(r);
        sup.rhs.remove(r);
        sup.pivots.remove(r);
        self.remove_var(j);
    }

    /// Sums out a variable no constraint mentions, via the Gauss sum
    /// `Σ_{x_j} i^{c x_j + 2 x_j L} = 1 + i^{c + 2L}`.
    fn sum_free_var(&mut self, j: usize) {
        let c = self.phase.diag(j);
        let mut form = self.phase.cross_row(j).clone();
        form.remove(j);
        self.phase.clear_var(j);
        self.remove_var(j);
        if form.is_zero() {
            match c {
                0 => self.scalar *= ExactScalar::sqrt2_pow(2),
                1 => self.scalar *= ExactScalar::new(1, 1),
                2 => self.make_zero(),
                _ => self.scalar *= ExactScalar::new(1, 7),
            }
            return;
        }
        match c {
            // 2·[L = 0]
            0 => {
                self.scalar *= ExactScalar::sqrt2_pow(2);
                self.add_constraint(form, false);
            }
            // 2·[L = 1]
            2 => {
                self.scalar *= ExactScalar::sqrt2_pow(2);
                self.add_constraint(form, true);
            }
            // 1 + i·(-1)^L = √2·ω·i^{3L²}
            1 => {
                self.scalar *= ExactScalar::new(1, 1);
                self.phase.add_square(&form, false, 3);
            }
            // 1 - i·(-1)^L = √2·ω^7·i^{L²}
            _ => {
                self.scalar *= ExactScalar::new(1, 7);
                self.phase.add_square(&form, false, 1);
            }
        }
    }

    pub(crate) fn marginalize_in_place(&mut self, j: usize) {
        if self.is_zero() {
            self.arity -= 1;
            self.make_zero();
            return;
        }
        if self.support.involves(j) {
            self.drop_determined(j);
        } else {
            self.sum_free_var(j);
        }
    }

    pub(crate) fn identify_in_place(&mut self, j: usize, l: usize) {
        let mut row = BitVec::unit(self.arity, j);
        row.set(l, true);
        self.add_constraint(row, false);
        self.marginalize_in_place(j);
    }

    pub(crate) fn pin_in_place(&mut self, j: usize, bit: bool) {
        self.add_constraint(BitVec::unit(self.arity, j), bit);
        self.marginalize_in_place(j);
    }
}

/// Row and column of `M_f` addressed by a full assignment of `2n` variables.
pub(crate) fn matrix_index(x: &BitVec, n: usize) -> (usize, usize) {
    let mut row = 0usize;
    let mut col = 0usize;
    for i in 0..n {
        row = (row << 1) | x.get(i) as usize;
        col = (col << 1) | x.get(2 * n - 1 - i) as usize;
    }
    (row, col)
}

/// Inverse of [`matrix_index`].
#[cfg(test)]
pub(crate) fn assignment_for(row: usize, col: usize, n: usize) -> BitVec {
    let mut x = BitVec::zeros(2 * n);
    for i in 0..n {
        x.set(i, (row >> (n - 1 - i)) & 1 == 1);
        x.set(2 * n - 1 - i, (col >> (n - 1 - i)) & 1 == 1);
    }
    x
}
