//! Thick-restart Lanczos with full reorthogonalization.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GsqcError, Result};
use crate::groundstate::{dot, norm};
use crate::hamiltonian::SparseHermitian;

/// Hermitian linear map on `C^dim`.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64], y: &mut [C64]);
}

impl LinearOperator for SparseHermitian {
    fn dim(&self) -> usize {
        self.dimension()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        SparseHermitian::apply(self, x, y)
    }
}

/// `P H P` with `P` the projector onto the complement of `deflate`.
pub struct Deflated<'a> {
    pub h: &'a SparseHermitian,
    pub deflate: &'a [Vec<C64>],
}

impl LinearOperator for Deflated<'_> {
    fn dim(&self) -> usize {
        self.h.dimension()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.h.apply(x, y);
        project_out(self.deflate, y);
    }
}

/// Removes the components along each (orthonormal) vector in `vs`.
pub fn project_out(vs: &[Vec<C64>], y: &mut [C64]) {
    for v in vs {
        let c = dot(v, y);
        axpy(-c, v, y);
    }
}

#[inline]
fn axpy(a: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Smallest,
    Largest,
}

#[derive(Clone, Debug)]
pub struct LanczosParams {
    pub k: usize,
    pub basis_size: usize,
    pub tol: f64,
    pub max_matvecs: usize,
    pub seed: u64,
    pub which: Which,
}

#[derive(Clone, Debug)]
pub struct LanczosOutcome {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
    /// `|β sᵢ|` estimates of `‖A x − θ x‖`.
    pub residual_estimates: Vec<f64>,
    pub matvecs: usize,
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng, against: &[&[Vec<C64>]]) -> Option<Vec<C64>> {
    for _ in 0..8 {
        let mut v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        for _ in 0..2 {
            for set in against {
                project_out(set, &mut v);
            }
        }
        let nv = norm(&v);
        if nv > 1e-8 * (n as f64).sqrt() {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

fn ritz(t: &DMatrix<C64>, size: usize, which: Which) -> (Vec<f64>, DMatrix<C64>) {
    let mut sub = t.view((0, 0), (size, size)).clone_owned();
    let adj = sub.adjoint();
    sub = (sub + adj) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sub);
    let mut order: Vec<usize> = (0..size).collect();
    match which {
        Which::Smallest => order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b])),
        Which::Largest => order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a])),
    }
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(size, size, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

fn combine(basis: &[Vec<C64>], y: &DMatrix<C64>, col: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); basis[0].len()];
    for (j, v) in basis.iter().enumerate() {
        axpy(y[(j, col)], v, &mut out);
    }
    out
}

/// Extremal eigenpairs of `op` restricted to the complement of `deflate`
/// (orthonormal vectors the operator preserves).
pub fn thick_restart_lanczos(
    op: &dyn LinearOperator,
    deflate: &[Vec<C64>],
    p: &LanczosParams,
) -> Result<LanczosOutcome> {
    let n = op.dim();
    let avail = n.saturating_sub(deflate.len());
    let k = p.k.min(avail);
    if k == 0 {
        return Ok(LanczosOutcome { values: vec![], vectors: vec![], residual_estimates: vec![], matvecs: 0 });
    }
    let m = p.basis_size.max(k + 2).min(avail);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let start = random_unit(n, &mut rng, &[deflate]).ok_or(GsqcError::ZeroVector)?;

    let mut basis: Vec<Vec<C64>> = vec![start];
    let mut t = DMatrix::<C64>::zeros(m, m);
    let mut filled = 0;
    let mut matvecs = 0;
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut scale = 0.0f64;

    loop {
        let mut beta_last = 0.0;
        while filled < basis.len() {
            let j = filled;
            op.apply(&basis[j], &mut w);
            matvecs += 1;
            project_out(deflate, &mut w);
            let mut before = norm(&w);
            for _ in 0..3 {
                for (i, v) in basis.iter().enumerate() {
                    let c = dot(v, &w);
                    t[(i, j)] += c;
                    axpy(-c, v, &mut w);
                }
                project_out(deflate, &mut w);
                let after = norm(&w);
                if after > 0.7 * before {
                    break;
                }
                before = after;
            }
            for i in 0..j {
                t[(j, i)] = t[(i, j)].conj();
            }
            scale = scale.max(t[(j, j)].re.abs());
            let beta = norm(&w);
            filled += 1;
            if basis.len() == m {
                beta_last = beta;
                break;
            }
            if beta <= 1e-13 * scale.max(f64::MIN_POSITIVE) {
                let fresh = random_unit(n, &mut rng, &[deflate, &basis]).ok_or(GsqcError::ZeroVector)?;
                basis.push(fresh);
            } else {
                w.iter_mut().for_each(|x| *x /= beta);
                t[(j + 1, j)] = C64::new(beta, 0.0);
                basis.push(w.clone());
            }
        }

        let size = basis.len();
        let (theta, y) = ritz(&t, size, p.which);
        let estimates: Vec<f64> = (0..k).map(|i| beta_last * y[(size - 1, i)].norm()).collect();
        let worst = estimates.iter().copied().fold(0.0, f64::max);
        let converged = worst <= p.tol || size == avail;
        if converged || matvecs >= p.max_matvecs {
            if !converged {
                return Err(GsqcError::NoConvergence { iterations: matvecs, residual: worst, tol: p.tol });
            }
            let vectors = (0..k)
                .map(|i| {
                    let mut x = combine(&basis, &y, i);
                    let nx = norm(&x);
                    x.iter_mut().for_each(|v| *v /= nx);
                    x
                })
                .collect();
            return Ok(LanczosOutcome { values: theta[..k].to_vec(), vectors, residual_estimates: estimates, matvecs });
        }

        let keep = (k + (m - k) / 2).min(size - 1).max(k);
        let mut next: Vec<Vec<C64>> = (0..keep).map(|i| combine(&basis, &y, i)).collect();
        t.fill(C64::new(0.0, 0.0));
        for i in 0..keep {
            t[(i, i)] = C64::new(theta[i], 0.0);
            t[(keep, i)] = y[(size - 1, i)] * beta_last;
        }
        w.iter_mut().for_each(|x| *x /= beta_last);
        next.push(w.clone());
        basis = next;
        filled = keep;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Diag(Vec<f64>);

    impl LinearOperator for Diag {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn apply(&self, x: &[C64], y: &mut [C64]) {
            for i in 0..x.len() {
                y[i] = x[i] * self.0[i];
            }
        }
    }

    fn params(k: usize, which: Which) -> LanczosParams {
        LanczosParams { k, basis_size: 20, tol: 1e-10, max_matvecs: 20_000, seed: 7, which }
    }

    #[test]
    fn diagonal_extremes_with_restarts() {
        let op = Diag((0..500).map(|i| 1.0 + i as f64 * 0.01).collect());
        let out = thick_restart_lanczos(&op, &[], &params(3, Which::Smallest)).unwrap();
        for (i, v) in out.values.iter().enumerate() {
            assert!((v - (1.0 + i as f64 * 0.01)).abs() < 1e-9, "{v}");
        }
        let out = thick_restart_lanczos(&op, &[], &params(2, Which::Largest)).unwrap();
        assert!((out.values[0] - 5.99).abs() < 1e-9);
    }

    #[test]
    fn respects_deflation() {
        let op = Diag(vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        let mut e0 = vec![C64::new(0.0, 0.0); 5];
        e0[0] = C64::new(1.0, 0.0);
        let out = thick_restart_lanczos(&op, &[e0], &params(2, Which::Smallest)).unwrap();
        assert!((out.values[0] - 1.0).abs() < 1e-12 && (out.values[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let op = Diag((0..300).map(|i| (i as f64).sqrt()).collect());
        let a = thick_restart_lanczos(&op, &[], &params(3, Which::Smallest)).unwrap();
        let b = thick_restart_lanczos(&op, &[], &params(3, Which::Smallest)).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.matvecs, b.matvecs);
    }

    #[test]
    fn reports_non_convergence() {
        let op = Diag((0..400).map(|i| (i as f64) * 1e-3).collect());
        let mut p = params(3, Which::Smallest);
        p.max_matvecs = 25;
        assert!(matches!(thick_restart_lanczos(&op, &[], &p), Err(GsqcError::NoConvergence { .. })));
    }
}
