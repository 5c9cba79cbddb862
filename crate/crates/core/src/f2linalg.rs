// SPDX-License-Identifier: Apache-2.0

//! Dense linear algebra over F_2 with rows stored as word bitsets.
//!
//! Elimination always pivots on the first nonzero column and the lowest
//! available row, so kernel bases and particular solutions are reproducible.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Bits `0..len` of `mask`.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = if len == WORD { mask } else { mask & ((1 << len) - 1) };
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let bit = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &F2Vector) -> F2Vector {
        F2Vector::from_bits(&self.bits().chain(other.bits()).collect::<Vec<_>>())
    }

    pub fn slice(&self, start: usize, end: usize) -> F2Vector {
        F2Vector::from_bits(&(start..end).map(|i| self.get(i)).collect::<Vec<_>>())
    }
}

impl std::ops::Add for &F2Vector {
    type Output = F2Vector;
    fn add(self, rhs: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.bits().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", b as u8)?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vector>,
}

/// Reduced row echelon form with the pivot column of each nonzero row.
struct Echelon {
    rows: Vec<F2Vector>,
    pivots: Vec<usize>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![F2Vector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&F2Vector::ones(n))
    }

    pub fn diag(d: &F2Vector) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for i in 0..d.len() {
            m.set(i, i, d.get(i));
        }
        m
    }

    /// Builds a matrix from 0/1 rows; panics on ragged input.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                F2Vector::from_bits(&r.iter().map(|&b| b & 1 == 1).collect::<Vec<_>>())
            })
            .collect();
        F2Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_row_vectors(rows: Vec<F2Vector>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        F2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Assembles a block matrix; blocks in a block row share a row count and
    /// blocks in a block column share a column count.
    pub fn from_blocks(blocks: &[Vec<&F2Matrix>]) -> Self {
        let col_widths: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        let cols = col_widths.iter().sum();
        let mut data = Vec::new();
        for block_row in blocks {
            assert_eq!(block_row.len(), col_widths.len());
            let h = block_row[0].rows;
            for (b, &w) in block_row.iter().zip(&col_widths) {
                assert!(b.rows == h && b.cols == w, "block shape mismatch");
            }
            for i in 0..h {
                let mut row = F2Vector::zeros(0);
                for b in block_row {
                    row = row.concat(&b.data[i]);
                }
                data.push(row);
            }
        }
        F2Matrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    /// A single column as an `r × 1` matrix.
    pub fn column(v: &F2Vector) -> Self {
        F2Matrix::from_row_vectors(v.bits().map(|b| F2Vector::from_bits(&[b])).collect(), 1)
    }

    /// A single row as a `1 × c` matrix.
    pub fn row_matrix(v: &F2Vector) -> Self {
        F2Matrix::from_row_vectors(vec![v.clone()], v.len())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.data[i].set(j, b);
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.data[i]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &F2Vector) -> F2Vector {
        assert_eq!(v.len(), self.cols);
        F2Vector::from_bits(&self.data.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    /// The `(r1..r2) × (c1..c2)` submatrix.
    pub fn block(&self, r1: usize, r2: usize, c1: usize, c2: usize) -> Self {
        F2Matrix::from_row_vectors(self.data[r1..r2].iter().map(|r| r.slice(c1, c2)).collect(), c2 - c1)
    }

    fn echelon(&self) -> Echelon {
        let mut rows = self.data.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            let Some(found) = (next..self.rows).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, found);
            let pivot = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            next += 1;
            if next == self.rows {
                break;
            }
        }
        rows.truncate(next);
        Echelon { rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<F2Vector> {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = F2Vector::zeros(self.cols);
                v.set(f, true);
                for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
                    if row.get(f) {
                        v.set(pc, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Every vector of the kernel, in the order of the binary counter over
    /// the kernel basis.
    pub fn kernel(&self) -> Vec<F2Vector> {
        span(&self.kernel_basis(), self.cols)
    }

    /// A particular solution of `M x = b`, or `None` if `b` is not in the
    /// column space.
    pub fn solve(&self, b: &F2Vector) -> Result<Option<F2Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let augmented = F2Matrix::from_blocks(&[vec![self, &F2Matrix::column(b)]]);
        let ech = augmented.echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = F2Vector::zeros(self.cols);
        for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
            x.set(pc, row.get(self.cols));
        }
        Ok(Some(x))
    }

    /// All solutions of `M x = b`.
    pub fn solutions(&self, b: &F2Vector) -> Result<Vec<F2Vector>> {
        Ok(match self.solve(b)? {
            None => Vec::new(),
            Some(x0) => self.kernel().iter().map(|k| &x0 + k).collect(),
        })
    }
}

impl std::ops::Add for &F2Matrix {
    type Output = F2Matrix;
    fn add(self, rhs: &F2Matrix) -> F2Matrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        F2Matrix::from_row_vectors(self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(), self.cols)
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r:?}")?;
        }
        write!(f, "]")
    }
}

/// All `2^len(basis)` combinations of the basis vectors.
pub fn span(basis: &[F2Vector], len: usize) -> Vec<F2Vector> {
    let mut out = vec![F2Vector::zeros(len)];
    for b in basis {
        let shifted: Vec<F2Vector> = out.iter().map(|v| v + b).collect();
        out.extend(shifted);
    }
    out
}
