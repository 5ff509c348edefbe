use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// A square complex matrix of power-of-two dimension, row-major.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(
            dim.is_power_of_two(),
            "dimension {dim} is not a power of two"
        );
        DenseMatrix {
            dim,
            data: vec![C0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C1);
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix must be square");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    /// Kronecker product; `self` acts on the more significant index bits.
    pub fn kron(&self, other: &DenseMatrix) -> Self {
        let d = self.dim * other.dim;
        let mut out = Self::zeros(d);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                if a == C0 {
                    continue;
                }
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        out.set(
                            r1 * other.dim + r2,
                            c1 * other.dim + c2,
                            a * other.get(r2, c2),
                        );
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Left-multiplies by `local` acting on `qubits` (qubit 0 is the most
    /// significant index bit), without forming the full operator.
    pub fn apply_local(&mut self, local: &DenseMatrix, qubits: &[usize]) {
        let n = self.num_qubits();
        let m = qubits.len();
        assert_eq!(local.dim, 1 << m);
        let masks: Vec<usize> = qubits.iter().map(|&q| 1 << (n - 1 - q)).collect();
        let all: usize = masks.iter().sum();
        let mut scratch = vec![C0; 1 << m];
        for col in 0..self.dim {
            for base in (0..self.dim).filter(|r| r & all == 0) {
                let idx = |a: usize| {
                    masks.iter().enumerate().fold(base, |acc, (k, &mk)| {
                        if (a >> (m - 1 - k)) & 1 == 1 {
                            acc | mk
                        } else {
                            acc
                        }
                    })
                };
                for (a, s) in scratch.iter_mut().enumerate() {
                    *s = (0..1 << m)
                        .map(|b| local.get(a, b) * self.get(idx(b), col))
                        .sum();
                }
                for (a, &s) in scratch.iter().enumerate() {
                    self.set(idx(a), col, s);
                }
            }
        }
    }

    /// Numerical rank by Gaussian elimination with partial pivoting. Pivots
    /// below `rel_tol · max|entry|` count as zero.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let mut a = self.data.clone();
        let d = self.dim;
        let thresh = rel_tol * self.max_abs().max(f64::MIN_POSITIVE);
        let mut rank = 0;
        for col in 0..d {
            let Some(piv) =
                (rank..d).max_by(|&x, &y| a[x * d + col].norm().total_cmp(&a[y * d + col].norm()))
            else {
                break;
            };
            if a[piv * d + col].norm() <= thresh {
                continue;
            }
            for c in 0..d {
                a.swap(rank * d + c, piv * d + c);
            }
            let p = a[rank * d + col];
            for r in rank + 1..d {
                let f = a[r * d + col] / p;
                if f != C0 {
                    for c in col..d {
                        let v = a[rank * d + c];
                        a[r * d + c] -= f * v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// `‖M M* − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.dim))
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == C0 {
                    continue;
                }
                for c in 0..d {
                    out.data[r * d + c] += a * rhs.data[k * d + c];
                }
            }
        }
        out
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{}", self.dim, self.dim)?;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let v = self.get(r, c);
                write!(f, " {:+.4}{:+.4}i", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
