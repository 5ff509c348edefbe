//! Bit-packed linear algebra over F2.
//!
//! Vectors are stored as packed `u64` words, matrices as a row-major list of
//! such vectors. Every hot path in the simulator is a row xor, so there is no
//! column-major storage; [`F2Matrix::transpose`] is an explicit copy.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum F2Error {
    #[error("invalid bit character {0:?}, expected '0' or '1'")]
    InvalidBit(char),
}

/// A fixed-length vector over F2. Bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// The unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Bit `i` of the result is bit `len - 1 - i` of `value`, so the string
    /// form reads like the big-endian binary expansion of `value`.
    pub fn from_uint_be(value: u64, len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            if (value >> (len - 1 - i)) & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    /// Inverse of [`BitVec::from_uint_be`].
    pub fn to_uint_be(&self) -> u64 {
        assert!(self.len <= 64, "bit vector too long for u64");
        (0..self.len).fold(0u64, |acc, i| (acc << 1) | self.get(i) as u64)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Inner product over F2.
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Number of positions set in both vectors.
    #[inline]
    pub fn and_count(&self, other: &BitVec) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    /// Removes bit `i`, shifting every higher bit down by one.
    pub fn remove(&mut self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let bit = self.get(i);
        let wi = i / WORD;
        let off = i % WORD;
        let low_mask = if off == 0 { 0 } else { (1u64 << off) - 1 };
        let w = self.words[wi];
        let mut shifted = (w & low_mask) | ((w >> 1) & !low_mask);
        for k in wi + 1..self.words.len() {
            let carry = self.words[k] & 1;
            shifted |= carry << (WORD - 1);
            self.words[k - 1] = shifted;
            shifted = self.words[k] >> 1;
        }
        let last = self.words.len() - 1;
        self.words[last] = shifted;
        self.len -= 1;
        self.words.truncate(words_for(self.len));
        bit
    }

    /// Inserts `bit` at position `i`, shifting bits at `i..` up by one.
    pub fn insert(&mut self, i: usize, bit: bool) {
        assert!(
            i <= self.len,
            "insert position {i} out of range {}",
            self.len
        );
        self.push(false);
        let wi = i / WORD;
        let off = i % WORD;
        for k in (wi + 1..self.words.len()).rev() {
            self.words[k] = (self.words[k] << 1) | (self.words[k - 1] >> (WORD - 1));
        }
        let low_mask = if off == 0 { 0 } else { (1u64 << off) - 1 };
        let w = self.words[wi];
        self.words[wi] = (w & low_mask) | ((w & !low_mask) << 1);
        self.set(i, bit);
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Grows with zeros or truncates to `new_len` bits.
    pub fn resize(&mut self, new_len: usize) {
        if new_len < self.len {
            self.words.truncate(words_for(new_len));
            let tail = new_len % WORD;
            if tail != 0 {
                *self.words.last_mut().expect("nonempty") &= (1u64 << tail) - 1;
            }
        } else {
            self.words.resize(words_for(new_len), 0);
        }
        self.len = new_len;
    }

    /// Copies bits into a vector of length `new_len`, placing bit `i` at
    /// `offset + i`.
    pub fn embed(&self, new_len: usize, offset: usize) -> BitVec {
        assert!(offset + self.len <= new_len);
        if offset == 0 {
            let mut out = self.clone();
            out.resize(new_len);
            return out;
        }
        let mut out = BitVec::zeros(new_len);
        for i in self.iter_ones() {
            out.set(offset + i, true);
        }
        out
    }

    /// Gathers the listed positions into a new vector.
    pub fn select(&self, positions: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(positions.len());
        for (k, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(k, true);
            }
        }
        out
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = F2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(F2Error::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BitVec::from_bools(&bits))
    }
}

/// Dense row-major matrix over F2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    cols: usize,
    data: Vec<BitVec>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix {
            cols: n,
            data: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length must equal column count");
        }
        F2Matrix { cols, data: rows }
    }

    /// Parses rows written as `"0110"` strings. Panics on malformed input;
    /// meant for literals.
    pub fn from_strs(rows: &[&str]) -> Self {
        let data: Vec<BitVec> = rows.iter().map(|r| r.parse().expect("bit row")).collect();
        let cols = data.first().map_or(0, BitVec::len);
        Self::from_rows(cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.data[r].set(c, bit)
    }

    #[inline]
    pub fn toggle(&mut self, r: usize, c: usize) {
        self.data[r].toggle(c)
    }

    #[inline]
    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut BitVec {
        &mut self.data[r]
    }

    pub fn row_slice(&self) -> &[BitVec] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.data
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols);
        self.data.push(row);
    }

    pub fn insert_row(&mut self, at: usize, row: BitVec) {
        assert_eq!(row.len(), self.cols);
        self.data.insert(at, row);
    }

    pub fn remove_row(&mut self, r: usize) -> BitVec {
        self.data.remove(r)
    }

    /// Appends `extra` zero columns.
    pub fn extend_cols(&mut self, extra: usize) {
        self.cols += extra;
        for row in &mut self.data {
            row.resize(self.cols);
        }
    }

    pub fn remove_col(&mut self, c: usize) {
        for row in &mut self.data {
            row.remove(c);
        }
        self.cols -= 1;
    }

    /// `self[r] ^= self[src]`.
    pub fn xor_rows(&mut self, dst: usize, src: usize) {
        assert_ne!(dst, src);
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src);
            (&mut lo[dst], &hi[0])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst);
            (&mut hi[0], &lo[src])
        };
        a.xor_assign(b);
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows());
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols);
        BitVec::from_bools(&self.data.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows());
        let mut out = F2Matrix::zeros(self.rows(), other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for k in row.iter_ones() {
                out.data[r].xor_assign(&other.data[k]);
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn stack(&self, below: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, below.cols);
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        F2Matrix {
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn rank(&self) -> usize {
        let order: Vec<usize> = (0..self.cols).collect();
        rref(self, &order).rank
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Matrix {}x{} [", self.rows(), self.cols)?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

/// Output of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: F2Matrix,
    /// `(row, col)` for every pivot, in row order.
    pub pivots: Vec<(usize, usize)>,
    pub rank: usize,
}

/// Gauss-Jordan elimination on `rows` with a parallel right-hand side.
///
/// Pivot columns are chosen greedily in `pivot_order`; columns absent from
/// `pivot_order` never become pivots. Pivot rows end up first, in the order
/// their pivots were found. Returns the pivots as `(row, col)`.
pub fn eliminate(
    rows: &mut [BitVec],
    mut rhs: Option<&mut BitVec>,
    pivot_order: &[usize],
) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for &col in pivot_order {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, found);
        if let Some(b) = rhs.as_deref_mut() {
            let (x, y) = (b.get(rank), b.get(found));
            b.set(rank, y);
            b.set(found, x);
        }
        let (before, rest) = rows.split_at_mut(rank);
        let (pivot_row, after) = rest.split_first_mut().expect("pivot row exists");
        let pivot_bit = rhs.as_deref().is_some_and(|b| b.get(rank));
        for (r, row) in before.iter_mut().enumerate() {
            if row.get(col) {
                row.xor_assign(pivot_row);
                if pivot_bit {
                    rhs.as_deref_mut().unwrap().toggle(r);
                }
            }
        }
        for (k, row) in after.iter_mut().enumerate() {
            if row.get(col) {
                row.xor_assign(pivot_row);
                if pivot_bit {
                    rhs.as_deref_mut().unwrap().toggle(rank + 1 + k);
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    pivots
}

/// Reduced row-echelon form with pivots taken greedily in `pivot_order`.
pub fn rref(m: &F2Matrix, pivot_order: &[usize]) -> Rref {
    debug_assert!(is_permutation(pivot_order, m.cols()));
    let mut rows = m.data.clone();
    let pivots = eliminate(&mut rows, None, pivot_order);
    let rank = pivots.len();
    Rref {
        matrix: F2Matrix {
            cols: m.cols,
            data: rows,
        },
        pivots,
        rank,
    }
}

fn is_permutation(order: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    order.len() == n
        && order
            .iter()
            .all(|&c| c < n && !std::mem::replace(&mut seen[c], true))
}

/// Solution set `particular + span(kernel_basis)` of a feasible system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolutionSet {
    pub particular: BitVec,
    pub kernel_basis: Vec<BitVec>,
}

impl AffineSolutionSet {
    /// Enumerates every solution. Only sensible for small kernels.
    pub fn enumerate(&self) -> Vec<BitVec> {
        let k = self.kernel_basis.len();
        assert!(k < 32, "kernel too large to enumerate");
        (0u64..1 << k)
            .map(|mask| {
                let mut v = self.particular.clone();
                for (i, kb) in self.kernel_basis.iter().enumerate() {
                    if (mask >> i) & 1 == 1 {
                        v.xor_assign(kb);
                    }
                }
                v
            })
            .collect()
    }
}

/// Solves `A x = b`. Returns `None` when the system is infeasible.
pub fn solve_affine(a: &F2Matrix, b: &BitVec) -> Option<AffineSolutionSet> {
    assert_eq!(
        a.rows(),
        b.len(),
        "right-hand side length must equal row count"
    );
    let mut rows = a.data.clone();
    let mut rhs = b.clone();
    let order: Vec<usize> = (0..a.cols()).collect();
    let pivots = eliminate(&mut rows, Some(&mut rhs), &order);
    let rank = pivots.len();
    if (rank..rows.len()).any(|r| rhs.get(r)) {
        return None;
    }
    let mut is_pivot = vec![false; a.cols()];
    let mut particular = BitVec::zeros(a.cols());
    for &(r, c) in &pivots {
        is_pivot[c] = true;
        particular.set(c, rhs.get(r));
    }
    let kernel_basis = (0..a.cols())
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = BitVec::unit(a.cols(), free);
            for &(r, c) in &pivots {
                if rows[r].get(free) {
                    v.set(c, true);
                }
            }
            v
        })
        .collect();
    Some(AffineSolutionSet {
        particular,
        kernel_basis,
    })
}

/// Full-rank test for a square matrix. Panics if `m` is not square.
pub fn is_nonsingular(m: &F2Matrix) -> bool {
    assert_eq!(
        m.rows(),
        m.cols(),
        "is_nonsingular requires a square matrix"
    );
    m.rank() == m.rows()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = F2Matrix::identity(2);
        let r = rref(&m, &natural(2));
        assert_eq!(r.matrix, m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn rref_duplicate_rows() {
        let m = F2Matrix::from_strs(&["11", "11"]);
        let r = rref(&m, &natural(2));
        assert_eq!(r.matrix, F2Matrix::from_strs(&["11", "00"]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn rref_dependent_third_row() {
        // Span enumeration: the 8 combinations of {110, 011, 101} give only
        // 4 distinct vectors, so the rank is 2.
        let rows = ["110", "011", "101"];
        let vecs: Vec<BitVec> = rows.iter().map(|r| r.parse().unwrap()).collect();
        let mut span = std::collections::HashSet::new();
        for mask in 0..8u32 {
            let mut v = BitVec::zeros(3);
            for (i, r) in vecs.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    v.xor_assign(r);
                }
            }
            span.insert(v);
        }
        assert_eq!(span.len(), 4);
        let r = rref(&F2Matrix::from_strs(&rows), &natural(3));
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn rref_respects_pivot_order() {
        let m = F2Matrix::from_strs(&["110", "011"]);
        let r = rref(&m, &[2, 1, 0]);
        assert_eq!(r.pivots.iter().map(|p| p.1).collect::<Vec<_>>(), vec![2, 1]);
        // Pivot columns are cleared in every other row.
        assert!(!r.matrix.get(1, 2));
        assert!(!r.matrix.get(0, 1));
    }

    #[test]
    fn rref_empty_matrix() {
        let m = F2Matrix::zeros(0, 3);
        assert_eq!(rref(&m, &natural(3)).rank, 0);
    }

    #[test]
    fn solve_forced() {
        let a = F2Matrix::identity(2);
        let s = solve_affine(&a, &"10".parse().unwrap()).unwrap();
        assert_eq!(s.particular.to_string(), "10");
        assert!(s.kernel_basis.is_empty());
    }

    #[test]
    fn solve_one_free_variable() {
        let a = F2Matrix::from_strs(&["11"]);
        let s = solve_affine(&a, &"1".parse().unwrap()).unwrap();
        assert_eq!(s.particular.to_string(), "10");
        assert_eq!(s.kernel_basis, vec!["11".parse().unwrap()]);
    }

    #[test]
    fn solve_contradiction() {
        let a = F2Matrix::from_strs(&["11", "11"]);
        assert!(solve_affine(&a, &"10".parse().unwrap()).is_none());
    }

    #[test]
    fn nonsingular_examples() {
        assert!(is_nonsingular(&F2Matrix::identity(3)));
        assert!(!is_nonsingular(&F2Matrix::zeros(2, 2)));
        // det [11;01] = 1*1 - 1*0 = 1 over F2.
        assert!(is_nonsingular(&F2Matrix::from_strs(&["11", "01"])));
    }

    #[test]
    #[should_panic]
    fn nonsingular_rejects_rectangular() {
        is_nonsingular(&F2Matrix::zeros(2, 3));
    }

    #[test]
    fn bit_remove_and_insert_across_words() {
        let mut v = BitVec::zeros(130);
        for i in [0, 63, 64, 65, 127, 129] {
            v.set(i, true);
        }
        let removed = v.remove(64);
        assert!(removed);
        assert_eq!(v.len(), 129);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64, 126, 128]);
        v.insert(64, true);
        assert_eq!(
            v.iter_ones().collect::<Vec<_>>(),
            vec![0, 63, 64, 65, 127, 129]
        );
    }

    #[test]
    fn uint_round_trip() {
        let v = BitVec::from_uint_be(0b1011, 4);
        assert_eq!(v.to_string(), "1011");
        assert_eq!(v.to_uint_be(), 0b1011);
    }
}
