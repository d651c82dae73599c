use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{GsqcError, Result};
use crate::groundstate::StateVector;
use crate::hamiltonian::SparseHermitian;

/// One eigenvalue (units of ε) with its normalized eigenvector.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub vector: StateVector,
}

/// Full Hermitian eigendecomposition; returns the `k` lowest pairs in ascending order.
pub fn dense_lowest(h: &SparseHermitian, k: usize, threshold: usize) -> Result<Vec<EigenPair>> {
    if h.dimension() > threshold {
        return Err(GsqcError::TooLargeForDense { dimension: h.dimension(), threshold });
    }
    Ok(dense_eigh(h.to_dense(), k))
}

/// Lowest `k` eigenpairs of a dense Hermitian matrix. Real input takes the real
/// symmetric path.
pub(crate) fn dense_eigh(m: DMatrix<C64>, k: usize) -> Vec<EigenPair> {
    let n = m.nrows();
    let k = k.min(n);
    let is_real = m.iter().all(|v| v.im == 0.0);
    let (values, vectors): (Vec<f64>, DMatrix<C64>) = if is_real {
        let re = m.map(|v| v.re);
        let eig = SymmetricEigen::new(re);
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors.map(|v| C64::new(v, 0.0)))
    } else {
        let eig = SymmetricEigen::new(m);
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    order
        .into_iter()
        .take(k)
        .map(|c| EigenPair { value: values[c], vector: StateVector::new(vectors.column(c).iter().copied().collect()) })
        .collect()
}
