//! Dense exact-rational matrices and linear-system primitives.
//!
//! Gaussian elimination uses the first nonzero pivot; over exact rationals no
//! pivot-size heuristics are needed and results are bit-reproducible.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rat;

/// Row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    /// Build from integer entries, row major.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&v| crate::scalar::rat_int(v)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    /// Exact product. Errors on inner-dimension mismatch.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Rat::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if !a.is_zero() {
                    out[i] += a * &v[j];
                }
            }
        }
        Ok(out)
    }

    /// Exact inverse by Gauss-Jordan on `[A | I]`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = Self::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = Rat::one();
        }
        let (_, pivots) = aug.rref();
        if pivots.iter().filter(|&&c| c < n).count() < n {
            return Err(Error::Singular);
        }
        let mut inv = Self::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                *inv.at_mut(i, j) = aug.at(i, n + j).clone();
            }
        }
        Ok(inv)
    }

    /// `gᵀg = I`, i.e. the standard euclidean norm is invariant under `g`.
    pub fn is_orthogonal(&self) -> bool {
        self.is_square()
            && self
                .transpose()
                .mul(self)
                .map(|p| p.is_identity())
                .unwrap_or(false)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form, first-nonzero pivoting.
    /// Returns the rank and the pivot column of each pivot row.
    pub fn rref(&mut self) -> (usize, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank >= self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(rank, p);
            let inv = self.at(rank, col).recip();
            for c in col..self.cols {
                let v = self.at(rank, c) * &inv;
                *self.at_mut(rank, c) = v;
            }
            for r in 0..self.rows {
                if r == rank || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for c in col..self.cols {
                    let sub = self.at(rank, c) * &factor;
                    *self.at_mut(r, c) -= sub;
                }
            }
            pivots.push(col);
            rank += 1;
        }
        (rank, pivots)
    }
}

/// Outcome of an exact linear solve: a particular solution when the system is
/// consistent, plus a basis of the kernel in either case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: Option<Vec<Rat>>,
    pub kernel: Vec<Vec<Rat>>,
}

impl LinearSolution {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }
}

/// Solve `a·x = rhs` exactly. The particular solution is canonical: zeros in
/// every non-pivot coordinate under the fixed column order.
pub fn solve_linear(a: &DenseMatrix, rhs: &[Rat]) -> Result<LinearSolution> {
    if a.rows() != rhs.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows but rhs has length {}",
            a.rows(),
            rhs.len()
        )));
    }
    let n = a.cols();
    let mut aug = DenseMatrix::zero(a.rows(), n + 1);
    for i in 0..a.rows() {
        for j in 0..n {
            *aug.at_mut(i, j) = a.at(i, j).clone();
        }
        *aug.at_mut(i, n) = rhs[i].clone();
    }
    let (rank, pivots) = aug.rref();

    // Inconsistent iff some pivot landed in the rhs column.
    let consistent = !pivots.contains(&n);
    let coeff_pivots: Vec<usize> = pivots.iter().copied().filter(|&c| c < n).collect();

    let particular = if consistent {
        let mut x = vec![Rat::zero(); n];
        for (row, &col) in coeff_pivots.iter().enumerate() {
            x[col] = aug.at(row, n).clone();
        }
        Some(x)
    } else {
        None
    };

    let pivot_set: std::collections::BTreeSet<usize> = coeff_pivots.iter().copied().collect();
    let mut kernel = Vec::new();
    for free in (0..n).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for (row, &col) in coeff_pivots.iter().enumerate() {
            v[col] = -aug.at(row, free).clone();
        }
        kernel.push(v);
    }

    let _ = rank;
    Ok(LinearSolution { particular, kernel })
}
