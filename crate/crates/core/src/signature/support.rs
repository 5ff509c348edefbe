use crate::f2::{AffineSolutionSet, BitVec, F2Matrix};

/// The affine subspace `{x : A x = b}` in reduced row-echelon form.
///
/// Row `i` has its pivot at `pivots[i]`, which is the lowest set column of
/// that row and is clear in every other row. Pivots are strictly increasing.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineSupport {
    pub(crate) constraints: F2Matrix,
    pub(crate) rhs: BitVec,
    pub(crate) pivots: Vec<usize>,
}

impl AffineSupport {
    pub fn full(arity: usize) -> Self {
        AffineSupport {
            constraints: F2Matrix::zeros(0, arity),
            rhs: BitVec::zeros(0),
            pivots: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.constraints.cols()
    }

    pub fn constraints(&self) -> &F2Matrix {
        &self.constraints
    }

    pub fn rhs(&self) -> &BitVec {
        &self.rhs
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn num_constraints(&self) -> usize {
        self.pivots.len()
    }

    /// Dimension of the affine subspace.
    pub fn dimension(&self) -> usize {
        self.arity() - self.num_constraints()
    }

    /// Index of the constraint row pivoting on `col`, if any.
    pub fn pivot_row(&self, col: usize) -> Option<usize> {
        self.pivots.binary_search(&col).ok()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row(col).is_some()
    }

    /// Free (non-pivot) variables in increasing order.
    pub fn free_vars(&self) -> Vec<usize> {
        (0..self.arity()).filter(|&c| !self.is_pivot(c)).collect()
    }

    /// Whether any constraint involves variable `col`.
    pub fn involves(&self, col: usize) -> bool {
        self.constraints.row_slice().iter().any(|r| r.get(col))
    }

    pub fn contains(&self, x: &BitVec) -> bool {
        self.constraints
            .row_slice()
            .iter()
            .enumerate()
            .all(|(i, r)| r.dot(x) == self.rhs.get(i))
    }

    /// Parametrization of the support by its free variables.
    pub fn solutions(&self) -> AffineSolutionSet {
        let k = self.arity();
        let mut particular = BitVec::zeros(k);
        for (i, &p) in self.pivots.iter().enumerate() {
            particular.set(p, self.rhs.get(i));
        }
        let kernel_basis = self
            .free_vars()
            .into_iter()
            .map(|f| {
                let mut v = BitVec::unit(k, f);
                for (i, &p) in self.pivots.iter().enumerate() {
                    if self.constraints.get(i, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        AffineSolutionSet {
            particular,
            kernel_basis,
        }
    }

    /// Structural checks for the reduced row-echelon invariant.
    pub fn check(&self) -> Result<(), String> {
        if self.rhs.len() != self.pivots.len() || self.constraints.rows() != self.pivots.len() {
            return Err("constraint, rhs and pivot counts differ".into());
        }
        for w in self.pivots.windows(2) {
            if w[0] >= w[1] {
                return Err(format!("pivots not increasing: {:?}", self.pivots));
            }
        }
        for (i, &p) in self.pivots.iter().enumerate() {
            let row = self.constraints.row(i);
            if row.first_one() != Some(p) {
                return Err(format!("row {i} does not lead with its pivot {p}"));
            }
            for (j, other) in self.constraints.row_slice().iter().enumerate() {
                if j != i && other.get(p) {
                    return Err(format!("pivot column {p} also set in row {j}"));
                }
            }
        }
        Ok(())
    }
}
