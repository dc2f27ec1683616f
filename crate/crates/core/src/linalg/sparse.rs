//! Compressed-sparse-row complex operators.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{C64, ZERO};
use crate::error::{Error, Result};

/// Rows above which matrix-vector products run in parallel.
const PAR_THRESHOLD: usize = 8192;

/// Square complex operator stored in CSR form.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl SparseOperator {
    /// Assemble from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets<I>(dim: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, C64)>,
    {
        let mut rows: Vec<BTreeMap<usize, C64>> = vec![BTreeMap::new(); dim];
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside dimension {dim}");
            *rows[r].entry(c).or_insert(ZERO) += v;
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                if v != ZERO {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self { dim, row_ptr, col_idx, values }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, row_ptr: vec![0; dim + 1], col_idx: Vec::new(), values: Vec::new() }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_triplets(dim, (0..dim).map(|i| (i, i, C64::from(1.0))))
    }

    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        let n = m.nrows();
        Self::from_triplets(
            n,
            (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| (r, c, m[(r, c)])),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterate over stored entries as `(row, col, value)`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.col_idx[range.clone()].binary_search(&col) {
            Ok(k) => self.values[range.start + k],
            Err(_) => ZERO,
        }
    }

    fn row_dot(&self, r: usize, x: &[C64]) -> C64 {
        let mut acc = ZERO;
        for k in self.row_ptr[r]..self.row_ptr[r + 1] {
            acc += self.values[k] * x[self.col_idx[k]];
        }
        acc
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        let mut y = vec![ZERO; self.dim];
        self.apply_into(x, &mut y)?;
        Ok(y)
    }

    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: y.len() });
        }
        if self.dim >= PAR_THRESHOLD {
            y.par_iter_mut().enumerate().for_each(|(r, yr)| *yr = self.row_dot(r, x));
        } else {
            for (r, yr) in y.iter_mut().enumerate() {
                *yr = self.row_dot(r, x);
            }
        }
        Ok(())
    }

    /// `<x|A|x>`.
    pub fn expectation(&self, x: &[C64]) -> Result<C64> {
        let ax = self.apply(x)?;
        Ok(super::inner(x, &ax))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Self, s: C64) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Ok(Self::from_triplets(
            self.dim,
            self.triplets().chain(other.triplets().map(|(r, c, v)| (r, c, v * s))),
        ))
    }

    /// Largest entrywise modulus of `A - A†`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (r, c, v) in self.triplets() {
            worst = worst.max((v - self.get(c, r).conj()).norm());
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// Largest modulus of a stored off-diagonal entry.
    pub fn off_diagonal_max(&self) -> f64 {
        self.triplets()
            .filter(|(r, c, _)| r != c)
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    /// Upper bound on the spectral norm (max absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        (0..self.dim)
            .map(|r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(|k| self.values[k].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}
