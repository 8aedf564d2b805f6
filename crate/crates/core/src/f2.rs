//! Exact linear algebra over the two-element field.
//!
//! Matrices are dense and bit-packed: each row is a sequence of `u64`
//! words, 64 columns per word. All elimination is exact; there is no
//! floating point anywhere in this module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the row-space rank: 2^20 vectors is the largest
/// enumeration accepted without an explicit override.
pub const DEFAULT_RANK_CAP: usize = 20;

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_euclid(WORD_BITS) + usize::from(!bits.is_multiple_of(WORD_BITS))
}

/// A bit vector of fixed length over GF(2). Padding bits are always clear.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Build from the low `len` bits of a mask, bit i -> coordinate i.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask & mask_low(len);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let w = &mut self.words[i / WORD_BITS];
        if value {
            *w |= 1u64 << (i % WORD_BITS);
        } else {
            *w &= !(1u64 << (i % WORD_BITS));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Indices of the set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    /// Low 64 coordinates as a mask (only valid for len <= 64).
    pub fn as_mask(&self) -> u64 {
        assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    /// Render as a 0/1 string, coordinate 0 first.
    pub fn to_bitstring(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl std::fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F2Vector({})", self.to_bitstring())
    }
}

fn mask_low(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// A dense bit-packed matrix over GF(2), stored row-major.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = words_for(cols);
        F2Matrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from 0/1 entries given row by row.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &e) in row.iter().enumerate() {
                if e % 2 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn from_row_vectors(rows: &[F2Vector]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(r, c);
        for (i, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), c);
            m.row_mut(i).copy_from_slice(&v.words);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.words_per_row + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words_per_row + c / WORD_BITS];
        if value {
            *w |= 1u64 << (c % WORD_BITS);
        } else {
            *w &= !(1u64 << (c % WORD_BITS));
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn row_vector(&self, r: usize) -> F2Vector {
        F2Vector {
            len: self.cols,
            words: self.row(r).to_vec(),
        }
    }

    pub fn col_vector(&self, c: usize) -> F2Vector {
        let mut v = F2Vector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let wpr = self.words_per_row;
        let (src_row, dst_row): (&[u64], &mut [u64]) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * wpr);
            (&lo[src * wpr..src * wpr + wpr], &mut hi[..wpr])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * wpr);
            (&hi[..wpr], &mut lo[dst * wpr..dst * wpr + wpr])
        };
        for (d, s) in dst_row.iter_mut().zip(src_row) {
            *d ^= s;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words_per_row {
            self.data.swap(a * self.words_per_row + k, b * self.words_per_row + k);
        }
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = F2Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    let (dst, src) = (r * out.words_per_row, c * rhs.words_per_row);
                    for k in 0..rhs.words_per_row {
                        out.data[dst + k] ^= rhs.data[src + k];
                    }
                }
            }
        }
        out
    }

    /// Apply to a column vector: self * v.
    pub fn mul_vector(&self, v: &F2Vector) -> F2Vector {
        assert_eq!(self.cols, v.len());
        let mut out = F2Vector::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (w, x) in self.row(r).iter().zip(&v.words) {
                acc ^= w & x;
            }
            if acc.count_ones() % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut out = F2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    /// Reduced row-echelon form, computed by Gaussian elimination with
    /// leftmost-pivot selection.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot_row) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(rank, pivot_row);
            for r in 0..m.rows {
                if r != rank && m.get(r, col) {
                    m.xor_row_into(rank, r);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        Rref {
            matrix: m,
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Enumerate the row space. Errors when the rank exceeds `cap`.
    pub fn row_space(&self, cap: usize) -> Result<RowSpace> {
        let rref = self.rref();
        if rref.rank > cap {
            return Err(Error::RankCap {
                rank: rref.rank,
                needed: 1u128 << rref.rank,
                cap,
            });
        }
        let basis = (0..rref.rank).map(|r| rref.matrix.row_vector(r)).collect();
        Ok(RowSpace {
            cols: self.cols,
            basis,
        })
    }

    /// Solve x * self = target for a row vector x, if the target lies in
    /// the row space. Returns the coefficient vector over the rows.
    pub fn solve_row_combination(&self, target: &F2Vector) -> Option<F2Vector> {
        assert_eq!(target.len(), self.cols);
        // Augment each row with the indicator of its index, eliminate, and
        // read the combination off a matching residual row.
        let aug_cols = self.cols + self.rows;
        let mut aug = F2Matrix::zeros(self.rows + 1, aug_cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            aug.set(r, self.cols + r, true);
        }
        for c in 0..self.cols {
            if target.get(c) {
                aug.set(self.rows, c, true);
            }
        }
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| aug.get(r, col)) else {
                continue;
            };
            aug.swap_rows(rank, p);
            for r in 0..=self.rows {
                if r != rank && aug.get(r, col) {
                    aug.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        let residual = aug.row_vector(self.rows);
        if (0..self.cols).any(|c| residual.get(c)) {
            return None;
        }
        let mut combo = F2Vector::zeros(self.rows);
        for r in 0..self.rows {
            if residual.get(self.cols + r) {
                combo.set(r, true);
            }
        }
        Some(combo)
    }

    /// Inverse of a square invertible matrix, by augmented elimination.
    pub fn inverse(&self) -> Option<F2Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = F2Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            aug.set(r, n + r, true);
        }
        let mut rank = 0;
        for col in 0..n {
            let p = (rank..n).find(|&r| aug.get(r, col))?;
            aug.swap_rows(rank, p);
            for r in 0..n {
                if r != rank && aug.get(r, col) {
                    aug.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        if rank < n {
            return None;
        }
        let mut inv = F2Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                if aug.get(r, n + c) {
                    inv.set(r, c, true);
                }
            }
        }
        Some(inv)
    }

    /// Check that every distinct non-zero column is part of an independent
    /// set and no column is zero. This is the normal-form criterion for
    /// pull-backs of the linear model: it holds iff some basis change sends
    /// every column to a standard basis vector.
    pub fn distinct_columns_independent(&self) -> ColumnIndependence {
        for c in 0..self.cols {
            if self.col_vector(c).is_zero() {
                return ColumnIndependence::ZeroColumn { column: c };
            }
        }
        let mut distinct: Vec<F2Vector> = Vec::new();
        let mut representatives: Vec<usize> = Vec::new();
        for c in 0..self.cols {
            let v = self.col_vector(c);
            if !distinct.contains(&v) {
                distinct.push(v);
                representatives.push(c);
            }
        }
        let as_rows = F2Matrix::from_row_vectors(&distinct);
        let rref = as_rows.rref();
        if rref.rank == distinct.len() {
            // Extend the distinct columns to a basis and invert; the result
            // maps each column to a standard basis vector.
            let n = self.rows;
            let mut basis_cols: Vec<F2Vector> = distinct.clone();
            for i in 0..n {
                if basis_cols.len() == n {
                    break;
                }
                let mut e = F2Vector::zeros(n);
                e.set(i, true);
                let probe = F2Matrix::from_row_vectors(
                    &basis_cols.iter().cloned().chain([e.clone()]).collect::<Vec<_>>(),
                );
                if probe.rank() == basis_cols.len() + 1 {
                    basis_cols.push(e);
                }
            }
            let mut b = F2Matrix::zeros(n, n);
            for (j, v) in basis_cols.iter().enumerate() {
                for i in 0..n {
                    if v.get(i) {
                        b.set(i, j, true);
                    }
                }
            }
            let normalizer = b.inverse().expect("basis completion is invertible");
            ColumnIndependence::Independent { normalizer }
        } else {
            // Witness: a dependency among the distinct columns.
            let dependent = first_dependency(&as_rows)
                .into_iter()
                .map(|i| representatives[i])
                .collect();
            ColumnIndependence::Dependent { columns: dependent }
        }
    }
}

impl std::fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row_vector(r).to_bitstring())?;
        }
        write!(f, "]")
    }
}

/// Result of reduced row-echelon elimination.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: F2Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Row indices participating in a linear dependency of a rank-deficient
/// matrix, found by elimination with row tracking.
fn first_dependency(m: &F2Matrix) -> Vec<usize> {
    let rows = m.rows();
    let cols = m.cols();
    let mut work = m.clone();
    let mut combo: Vec<u128> = (0..rows).map(|r| 1u128 << r).collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| work.get(r, col)) else {
            continue;
        };
        work.swap_rows(rank, p);
        combo.swap(rank, p);
        for r in 0..rows {
            if r != rank && work.get(r, col) {
                work.xor_row_into(rank, r);
                combo[r] ^= combo[rank];
            }
        }
        rank += 1;
    }
    for (r, &mask) in combo.iter().enumerate() {
        if mask != 0 && work.row_vector(r).is_zero() {
            return (0..rows).filter(|i| mask >> i & 1 == 1).collect();
        }
    }
    Vec::new()
}

/// Outcome of the distinct-column independence test, with a witness either
/// way: a normalizing basis change on success, the offending columns on
/// failure.
#[derive(Clone, Debug)]
pub enum ColumnIndependence {
    Independent { normalizer: F2Matrix },
    Dependent { columns: Vec<usize> },
    ZeroColumn { column: usize },
}

impl ColumnIndependence {
    pub fn holds(&self) -> bool {
        matches!(self, ColumnIndependence::Independent { .. })
    }
}

/// The row space of a matrix, enumerable as 2^rank vectors.
///
/// Vectors are indexed by a binary counter over the reduced row basis:
/// index 0 is the zero vector, and index i is the XOR of basis rows
/// selected by the set bits of i. Disjoint index ranges may be consumed
/// in parallel.
#[derive(Clone, Debug)]
pub struct RowSpace {
    cols: usize,
    basis: Vec<F2Vector>,
}

impl RowSpace {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        1usize << self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    /// The vector at counter index `i`; index 0 is the zero vector.
    pub fn get(&self, i: usize) -> F2Vector {
        assert!(i < self.len());
        let mut v = F2Vector::zeros(self.cols);
        for (bit, row) in self.basis.iter().enumerate() {
            if i >> bit & 1 == 1 {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = F2Vector> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }
}
