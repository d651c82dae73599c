//! Preconditioned conjugate gradients for the shifted, deflated operator.

use num_complex::Complex64 as C64;

use crate::groundstate::{dot, norm};
use crate::hamiltonian::SparseHermitian;

use super::lanczos::{project_out, LinearOperator};

/// `(P (H + σ) P)⁻¹` on the complement of the deflation vectors, applied by
/// Jacobi-preconditioned CG.
pub struct ShiftInvert<'a> {
    h: &'a SparseHermitian,
    sigma: f64,
    deflate: &'a [Vec<C64>],
    inv_diag: Vec<f64>,
    rel_tol: f64,
    max_iter: usize,
}

impl<'a> ShiftInvert<'a> {
    pub fn new(h: &'a SparseHermitian, sigma: f64, deflate: &'a [Vec<C64>], rel_tol: f64, max_iter: usize) -> Self {
        let inv_diag = h.diagonal().into_iter().map(|d| 1.0 / (d + sigma).max(sigma)).collect();
        Self { h, sigma, deflate, inv_diag, rel_tol, max_iter }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    fn shifted(&self, x: &[C64], y: &mut [C64]) {
        self.h.apply(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi += self.sigma * xi;
        }
        project_out(self.deflate, y);
    }

    /// Solves `(H + σ) x = b` for `b` in the deflated complement. Returns the
    /// number of CG steps taken.
    pub fn solve(&self, b: &[C64], x: &mut [C64]) -> usize {
        let n = b.len();
        let mut r = b.to_vec();
        project_out(self.deflate, &mut r);
        x.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        let b_norm = norm(&r);
        if b_norm == 0.0 {
            return 0;
        }
        let precondition = |r: &[C64], z: &mut Vec<C64>| {
            z.clear();
            z.extend(r.iter().zip(&self.inv_diag).map(|(a, d)| a * d));
            project_out(self.deflate, z);
        };
        let mut z = Vec::with_capacity(n);
        precondition(&r, &mut z);
        let mut p = z.clone();
        let mut rz = dot(&r, &z).re;
        let mut ap = vec![C64::new(0.0, 0.0); n];
        for it in 1..=self.max_iter {
            self.shifted(&p, &mut ap);
            let alpha = rz / dot(&p, &ap).re;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            if norm(&r) <= self.rel_tol * b_norm {
                return it;
            }
            precondition(&r, &mut z);
            let rz_new = dot(&r, &z).re;
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        self.max_iter
    }
}

impl LinearOperator for ShiftInvert<'_> {
    fn dim(&self) -> usize {
        self.h.dimension()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.solve(x, y);
        project_out(self.deflate, y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build_basis;
    use crate::circuit::{two_qubit_circuit, Terminal};
    use crate::hamiltonian::assemble;

    #[test]
    fn solves_shifted_system() {
        let c = two_qubit_circuit(4, 3.0, Terminal::Boost, Terminal::Boost).unwrap();
        let h = assemble(&c, &build_basis(&c).unwrap()).unwrap();
        let si = ShiftInvert::new(&h, 0.5, &[], 1e-13, 500);
        let b: Vec<C64> = (0..64).map(|i| C64::new((i as f64).cos(), 0.1 * i as f64)).collect();
        let mut x = vec![C64::new(0.0, 0.0); 64];
        si.solve(&b, &mut x);
        let mut ax = vec![C64::new(0.0, 0.0); 64];
        si.shifted(&x, &mut ax);
        let err: f64 = ax.iter().zip(&b).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        assert!(err <= 1e-11 * norm(&b), "{err}");
    }
}
