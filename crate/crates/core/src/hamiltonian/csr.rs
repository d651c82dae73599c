use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{GsqcError, Result};

/// Compressed-sparse-row Hermitian matrix, entries in units of ε.
///
/// Rows are sorted by column with duplicates merged, so the matrix is canonical
/// for a given circuit and `matvec` is bitwise reproducible.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHermitian {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<C64>,
}

const PAR_ROWS: usize = 2048;

impl SparseHermitian {
    pub(crate) fn from_parts(dim: usize, row_ptr: Vec<usize>, cols: Vec<u32>, vals: Vec<C64>) -> Self {
        debug_assert_eq!(row_ptr.len(), dim + 1);
        debug_assert_eq!(cols.len(), vals.len());
        Self { dim, row_ptr, cols, vals }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[u32], &[C64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&(j as u32)) {
            Ok(k) => vals[k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// Number of off-diagonal entries in the densest row.
    pub fn max_offdiag_per_row(&self) -> usize {
        (0..self.dim).map(|i| self.row(i).0.iter().filter(|&&c| c as usize != i).count()).max().unwrap_or(0)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    /// Gershgorin bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim).map(|i| self.row(i).1.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// `y = H x`. Each row is summed in stored column order.
    pub fn apply(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let body = |start: usize, chunk: &mut [C64]| {
            for (k, out) in chunk.iter_mut().enumerate() {
                let (cols, vals) = self.row(start + k);
                let mut acc = C64::new(0.0, 0.0);
                for (&c, &v) in cols.iter().zip(vals) {
                    acc += v * x[c as usize];
                }
                *out = acc;
            }
        };
        if self.dim >= 4 * PAR_ROWS {
            y.par_chunks_mut(PAR_ROWS).enumerate().for_each(|(b, chunk)| body(b * PAR_ROWS, chunk));
        } else {
            body(0, y);
        }
    }

    pub fn matvec(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.dim {
            return Err(GsqcError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let mut y = vec![C64::new(0.0, 0.0); self.dim];
        self.apply(x, &mut y);
        Ok(y)
    }

    /// Largest `|H_ij − conj(H_ji)|` over stored entries.
    pub fn hermiticity_residual(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(|(&j, &v)| (v - self.get(j as usize, i).conj()).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                m[(i, c as usize)] = v;
            }
        }
        m
    }

    /// Coordinate dump, one `i j re im` line per stored entry in row-major order.
    pub fn write_coo<W: Write>(&self, mut w: W) -> io::Result<()> {
        for i in 0..self.dim {
            let (cols, vals) = self.row(i);
            for (&c, v) in cols.iter().zip(vals) {
                writeln!(w, "{i} {c} {:.17e} {:.17e}", v.re, v.im)?;
            }
        }
        Ok(())
    }
}
