//! Packed linear algebra over GF(2).
//!
//! Rows are `u64` words; elimination XORs whole words and always pivots on the
//! leftmost available column, so certificates are deterministic.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Column-space rank above which [`coset_min_weight`] refuses to enumerate.
pub const DEFAULT_DEGREE_CAP: usize = 28;

/// Column-space rank from which the Gray-code walk is split across workers.
const PARALLEL_MIN_RANK: usize = 18;
/// Number of leading basis vectors fixed per parallel chunk.
const PARALLEL_PREFIX_BITS: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Vector of length `len` with ones at `indices`.
    ///
    /// Panics if an index is out of range.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// `self += other`. Panics on a length mismatch.
    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n_cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_cols,
            rows: vec![BitVector::zeros(n_cols); n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `n_cols`.
    pub fn from_rows(n_cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch {
                left: n_cols,
                right: bad.len(),
            });
        }
        Ok(Self { n_cols, rows })
    }

    /// Parses rows of `0`/`1` characters.
    pub fn from_strs(n_cols: usize, rows: &[&str]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| BitVector::from_bools(&r.bytes().map(|b| b == b'1').collect::<Vec<_>>()))
            .collect();
        Self::from_rows(n_cols, rows)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.n_cols {
            return Err(Error::DimensionMismatch {
                left: self.n_cols,
                right: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// `A·x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.n_cols {
            return Err(Error::DimensionMismatch {
                left: self.n_cols,
                right: x.len(),
            });
        }
        Ok(BitVector::from_bools(&self.rows.iter().map(|r| r.dot(x)).collect::<Vec<_>>()))
    }

    /// `yᵀ·A`.
    pub fn left_mul_vec(&self, y: &BitVector) -> Result<BitVector> {
        if y.len() != self.n_rows() {
            return Err(Error::DimensionMismatch {
                left: self.n_rows(),
                right: y.len(),
            });
        }
        let mut out = BitVector::zeros(self.n_cols);
        for i in y.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        Ok(out)
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bools(&self.rows.iter().map(|r| r.get(c)).collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix {
            n_cols: self.n_rows(),
            rows: (0..self.n_cols).map(|c| self.column(c)).collect(),
        }
    }

    /// `(A | b)`.
    pub fn augment(&self, b: &BitVector) -> Result<BitMatrix> {
        if b.len() != self.n_rows() {
            return Err(Error::DimensionMismatch {
                left: self.n_rows(),
                right: b.len(),
            });
        }
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut wide = BitVector::zeros(self.n_cols + 1);
                for c in r.iter_ones() {
                    wide.set(c, true);
                }
                wide.set(self.n_cols, b.get(i));
                wide
            })
            .collect();
        Ok(BitMatrix {
            n_cols: self.n_cols + 1,
            rows,
        })
    }

    /// Row rank over GF(2).
    pub fn rank(&self) -> usize {
        reduced_basis(self.rows.iter().cloned()).len()
    }
}

/// Reduces `vectors` to a list of independent vectors with distinct leading bits.
fn reduced_basis(vectors: impl Iterator<Item = BitVector>) -> Vec<BitVector> {
    let mut basis: Vec<(usize, BitVector)> = Vec::new();
    for mut v in vectors {
        for (lead, b) in &basis {
            if v.get(*lead) {
                v.xor_assign(b);
            }
        }
        if let Some(lead) = v.first_one() {
            basis.push((lead, v));
        }
    }
    basis.into_iter().map(|(_, v)| v).collect()
}

/// Outcome of [`solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// `A·x = b`.
    Consistent(BitVector),
    /// A row combination `y` with `yᵀA = 0` and `yᵀb = 1`.
    Inconsistent(BitVector),
}

impl Solution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Solution::Consistent(_))
    }
}

/// Solves `A·x = b` by Gauss-Jordan elimination, tracking row combinations.
pub fn solve(a: &BitMatrix, b: &BitVector) -> Result<Solution> {
    let n_rows = a.n_rows();
    if b.len() != n_rows {
        return Err(Error::DimensionMismatch {
            left: n_rows,
            right: b.len(),
        });
    }
    let mut rows: Vec<BitVector> = a.rows.clone();
    let mut rhs: Vec<bool> = (0..n_rows).map(|i| b.get(i)).collect();
    let mut combos: Vec<BitVector> = (0..n_rows).map(|i| BitVector::from_indices(n_rows, [i])).collect();

    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..a.n_cols {
        if next == n_rows {
            break;
        }
        let Some(found) = (next..n_rows).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, found);
        rhs.swap(next, found);
        combos.swap(next, found);
        let (pivot_row, pivot_rhs, pivot_combo) = (rows[next].clone(), rhs[next], combos[next].clone());
        for r in 0..n_rows {
            if r != next && rows[r].get(col) {
                rows[r].xor_assign(&pivot_row);
                rhs[r] ^= pivot_rhs;
                combos[r].xor_assign(&pivot_combo);
            }
        }
        pivots.push(col);
        next += 1;
    }

    if let Some(bad) = (next..n_rows).find(|&r| rhs[r]) {
        return Ok(Solution::Inconsistent(combos.swap_remove(bad)));
    }
    let mut x = BitVector::zeros(a.n_cols);
    for (i, &col) in pivots.iter().enumerate() {
        x.set(col, rhs[i]);
    }
    Ok(Solution::Consistent(x))
}

/// Checks a certificate without using the solver: `yᵀA = 0` and `yᵀb = 1`.
pub fn verify_certificate(a: &BitMatrix, b: &BitVector, y: &BitVector) -> bool {
    if y.len() != a.n_rows() || b.len() != a.n_rows() {
        return false;
    }
    let mut acc = BitVector::zeros(a.n_cols());
    for i in y.iter_ones() {
        acc.xor_assign(&a.rows[i]);
    }
    acc.is_zero() && y.dot(b)
}

/// Minimum of `weight(A·x + b)` over all `x`: the Hamming distance from `b` to
/// the column space of `A`.
///
/// Walks the column space in Gray-code order, one XOR per step, so the cost is
/// `2^rank(A)`. Fails with [`Error::CapExceeded`] when the rank is above `cap`.
pub fn coset_min_weight(a: &BitMatrix, b: &BitVector, cap: usize) -> Result<usize> {
    if b.len() != a.n_rows() {
        return Err(Error::DimensionMismatch {
            left: a.n_rows(),
            right: b.len(),
        });
    }
    let basis = reduced_basis((0..a.n_cols()).map(|c| a.column(c)));
    let rank = basis.len();
    if rank > cap || rank >= 64 {
        return Err(Error::CapExceeded { rank, cap });
    }
    if rank < PARALLEL_MIN_RANK {
        return Ok(gray_walk(b.clone(), &basis));
    }
    let (low, high) = basis.split_at(rank - PARALLEL_PREFIX_BITS);
    let best = (0u64..1 << PARALLEL_PREFIX_BITS)
        .into_par_iter()
        .map(|prefix| {
            let mut start = b.clone();
            for (bit, v) in high.iter().enumerate() {
                if prefix >> bit & 1 == 1 {
                    start.xor_assign(v);
                }
            }
            gray_walk(start, low)
        })
        .min()
        .expect("non-empty prefix range");
    Ok(best)
}

fn gray_walk(mut current: BitVector, basis: &[BitVector]) -> usize {
    let mut best = current.weight();
    for step in 1u64..(1u64 << basis.len()) {
        current.xor_assign(&basis[step.trailing_zeros() as usize]);
        best = best.min(current.weight());
        if best == 0 {
            break;
        }
    }
    best
}
