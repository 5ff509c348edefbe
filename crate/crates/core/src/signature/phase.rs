use crate::f2::{BitVec, F2Matrix};

/// A quadratic form `Q(x) = Σ diag_j x_j + 2 Σ_{j<l} cross_{jl} x_j x_l (mod 4)`
/// on Boolean inputs.
///
/// Linear terms are folded into the diagonal (`x = x²` on `{0,1}`), and cross
/// terms only matter mod 2 because they always carry a factor of 2.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadraticPhase {
    diag: Vec<u8>,
    cross: F2Matrix,
}

impl QuadraticPhase {
    pub fn zero(arity: usize) -> Self {
        QuadraticPhase {
            diag: vec![0; arity],
            cross: F2Matrix::zeros(arity, arity),
        }
    }

    /// Builds a phase from explicit coefficients. `cross` must be symmetric
    /// with zero diagonal; diagonal values are reduced mod 4.
    pub fn from_parts(diag: Vec<u8>, cross: F2Matrix) -> Self {
        let k = diag.len();
        assert_eq!((cross.rows(), cross.cols()), (k, k), "cross must be k x k");
        for j in 0..k {
            assert!(!cross.get(j, j), "cross diagonal must be zero");
            for l in 0..j {
                assert_eq!(cross.get(j, l), cross.get(l, j), "cross must be symmetric");
            }
        }
        QuadraticPhase {
            diag: diag.into_iter().map(|d| d % 4).collect(),
            cross,
        }
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.diag.len()
    }

    #[inline]
    pub fn diag(&self, j: usize) -> u8 {
        self.diag[j]
    }

    pub fn diag_values(&self) -> &[u8] {
        &self.diag
    }

    #[inline]
    pub fn cross(&self, j: usize, l: usize) -> bool {
        self.cross.get(j, l)
    }

    pub fn cross_matrix(&self) -> &F2Matrix {
        &self.cross
    }

    /// Row `j` of the cross matrix: the variables coupled to `x_j`.
    pub fn cross_row(&self, j: usize) -> &BitVec {
        self.cross.row(j)
    }

    pub fn add_diag(&mut self, j: usize, v: u8) {
        self.diag[j] = (self.diag[j] + v) % 4;
    }

    pub fn toggle_cross(&mut self, j: usize, l: usize) {
        assert_ne!(j, l, "cross terms need distinct variables");
        self.cross.toggle(j, l);
        self.cross.toggle(l, j);
    }

    /// Whether `x_j` appears anywhere in the form.
    pub fn involves(&self, j: usize) -> bool {
        self.diag[j] != 0 || !self.cross.row(j).is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.diag.iter().all(|&d| d == 0) && self.cross.is_zero()
    }

    /// `Q(x) mod 4`.
    pub fn evaluate(&self, x: &BitVec) -> u8 {
        let mut total = 0usize;
        for j in x.iter_ones() {
            // Each unordered pair is seen twice, which supplies the factor 2.
            total += self.diag[j] as usize + self.cross.row(j).and_count(x);
        }
        (total % 4) as u8
    }

    pub fn conjugate(&self) -> Self {
        QuadraticPhase {
            diag: self.diag.iter().map(|&d| (4 - d) % 4).collect(),
            cross: self.cross.clone(),
        }
    }

    pub fn direct_sum(&self, other: &QuadraticPhase) -> Self {
        let mut out = self.clone();
        out.append(other);
        out
    }

    /// In-place direct sum: `other`'s variables follow this phase's.
    pub(crate) fn append(&mut self, other: &QuadraticPhase) {
        let offset = self.arity();
        let k = offset + other.arity();
        self.diag.extend_from_slice(&other.diag);
        self.cross.extend_cols(other.arity());
        for r in other.cross.row_slice() {
            self.cross.push_row(r.embed(k, offset));
        }
    }

    /// Relabels variable `i` as `sigma[i]`.
    pub fn permuted(&self, sigma: &[usize]) -> Self {
        let k = self.arity();
        let mut out = QuadraticPhase::zero(k);
        for i in 0..k {
            out.diag[sigma[i]] = self.diag[i];
            for l in self.cross.row(i).iter_ones() {
                out.cross.set(sigma[i], sigma[l], true);
            }
        }
        out
    }

    /// Deletes variable `j`, which is expected not to appear in the form.
    pub(crate) fn remove_var(&mut self, j: usize) {
        debug_assert!(!self.involves(j), "removing a variable still in the phase");
        self.diag.remove(j);
        self.cross.remove_row(j);
        self.cross.remove_col(j);
    }

    /// Drops every term mentioning `x_j`.
    pub(crate) fn clear_var(&mut self, j: usize) {
        self.diag[j] = 0;
        let k = self.arity();
        let coupled = std::mem::replace(self.cross.row_mut(j), BitVec::zeros(k));
        for l in coupled.iter_ones() {
            self.cross.set(l, j, false);
        }
    }

    /// Adds `coeff · (a + Σ_{l∈S} x_l)²` where the sum is taken over the
    /// integers. Only the parity of the linear form matters mod 4, so `S` may
    /// be any F2 linear form. Returns the constant term picked up, mod 4.
    pub(crate) fn add_square(&mut self, s: &BitVec, a: bool, coeff: u8) -> u8 {
        let coeff = coeff % 4;
        if coeff == 0 {
            return 0;
        }
        let linear = (coeff * (1 + 2 * a as u8)) % 4;
        let members: Vec<usize> = s.iter_ones().collect();
        for &l in &members {
            self.diag[l] = (self.diag[l] + linear) % 4;
        }
        if coeff % 2 == 1 {
            for &l in &members {
                self.cross.row_mut(l).xor_assign(s);
                self.cross.toggle(l, l);
            }
        }
        (coeff * a as u8) % 4
    }

    /// Adds `2 · (a + Σ_S x) · (b + Σ_T x)`. Returns the constant term mod 4.
    pub(crate) fn add_twice_product(&mut self, s: &BitVec, a: bool, t: &BitVec, b: bool) -> u8 {
        for j in t.iter_ones() {
            if a {
                self.add_diag(j, 2);
            }
            self.cross.row_mut(j).xor_assign(s);
        }
        for j in s.iter_ones() {
            if b {
                self.add_diag(j, 2);
            }
            self.cross.row_mut(j).xor_assign(t);
        }
        // x_j·x_j for j in both sets collapses to x_j; the two row updates
        // above toggled the diagonal bit twice, so it is already clear.
        for j in s.and(t).iter_ones() {
            self.add_diag(j, 2);
        }
        if a && b {
            2
        } else {
            0
        }
    }

    /// Eliminates `x_d` by substituting `x_d ≡ a + Σ_{l∈expr} x_l (mod 2)`.
    ///
    /// Valid because `x ≡ y (mod 2)` implies `x² ≡ y² (mod 4)` and cross
    /// terms are even. `expr` must not contain `d`. Returns the constant term
    /// picked up, mod 4; afterwards `x_d` no longer appears.
    pub(crate) fn substitute(&mut self, d: usize, expr: &BitVec, a: bool) -> u8 {
        debug_assert!(
            !expr.get(d),
            "substitution expression contains its own variable"
        );
        let dd = self.diag[d];
        let coupled = self.cross.row(d).clone();
        self.clear_var(d);
        let c1 = self.add_square(expr, a, dd);
        let c2 = if coupled.is_zero() {
            0
        } else {
            self.add_twice_product(expr, a, &coupled, false)
        };
        (c1 + c2) % 4
    }
}
