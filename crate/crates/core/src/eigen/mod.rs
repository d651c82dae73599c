//! Low-lying spectrum: dense oracle, Krylov solver and the gap driver.

mod cg;
mod dense;
mod lanczos;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

pub use cg::ShiftInvert;
pub use dense::{dense_lowest, EigenPair};
pub use lanczos::{project_out, thick_restart_lanczos, Deflated, LanczosOutcome, LanczosParams, LinearOperator, Which};

use crate::basis::build_basis;
use crate::circuit::{circuit_hash, CircuitSpec};
use crate::error::{GsqcError, Result};
use crate::groundstate::{construct_ground_state, dot, StateVector};
use crate::hamiltonian::{assemble, SparseHermitian};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EigenOptions {
    /// Number of lowest eigenvalues wanted, counting `E0`.
    pub k: usize,
    /// Absolute residual tolerance; `None` means `min(1e-11·√D, 1e-9)`.
    pub tol: Option<f64>,
    pub max_matvecs: usize,
    pub basis_size: usize,
    pub seed: u64,
    pub dense_threshold: usize,
    pub shift_invert: bool,
    /// Eigenvalues closer than this are reported as one cluster.
    pub cluster_tol: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            k: 3,
            tol: None,
            max_matvecs: 400_000,
            basis_size: 48,
            seed: 20_240_917,
            dense_threshold: 2048,
            shift_invert: false,
            cluster_tol: 1e-10,
        }
    }
}

impl EigenOptions {
    pub fn tolerance(&self, dim: usize) -> f64 {
        self.tol.unwrap_or_else(|| (1e-11 * (dim as f64).sqrt()).min(1e-9))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Dense,
    Krylov,
    KrylovShiftInvert,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Dense => "dense",
            Method::Krylov => "krylov",
            Method::KrylovShiftInvert => "krylov+shift-invert",
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GapResult {
    pub circuit_hash: String,
    pub dimension: usize,
    pub e0: f64,
    pub e1: f64,
    pub e2: Option<f64>,
    /// `E1 − E0` in units of ε.
    pub gap: f64,
    /// `‖H x − E x‖` for each reported eigenvalue, ground state first.
    pub residuals: Vec<f64>,
    pub method: Method,
    /// Whether the analytic ground state was projected out.
    pub deflated: bool,
    /// Eigenvalues within `cluster_tol` of `E1`, among those computed.
    pub e1_multiplicity: usize,
    pub matvecs: usize,
    pub tol: f64,
}

/// Lowest excited pairs of `H` with `deflate` (orthonormal) projected out.
pub fn krylov_lowest(
    h: &SparseHermitian,
    opts: &EigenOptions,
    count: usize,
    deflate: &[Vec<C64>],
) -> Result<(Vec<EigenPair>, usize)> {
    let tol = opts.tolerance(h.dimension());
    let mut params = LanczosParams {
        k: count,
        basis_size: opts.basis_size,
        tol,
        max_matvecs: opts.max_matvecs,
        seed: opts.seed,
        which: Which::Smallest,
    };
    let outcome = if opts.shift_invert {
        let si = ShiftInvert::new(h, tol, deflate, 1e-12, opts.max_matvecs);
        params.which = Which::Largest;
        params.tol = tol / h.norm_bound().max(1.0);
        thick_restart_lanczos(&si, deflate, &params)?
    } else {
        thick_restart_lanczos(&Deflated { h, deflate }, deflate, &params)?
    };
    let mut pairs: Vec<EigenPair> = outcome
        .vectors
        .into_iter()
        .map(|v| {
            let value = rayleigh(h, &v);
            EigenPair { value, vector: StateVector::new(v) }
        })
        .collect();
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    if opts.shift_invert {
        let worst = pairs.iter().map(|p| residual(h, p.vector.amps(), p.value)).fold(0.0, f64::max);
        if worst > tol {
            return Err(GsqcError::NoConvergence { iterations: outcome.matvecs, residual: worst, tol });
        }
    }
    Ok((pairs, outcome.matvecs))
}

fn rayleigh(h: &SparseHermitian, v: &[C64]) -> f64 {
    let mut hv = vec![C64::new(0.0, 0.0); v.len()];
    h.apply(v, &mut hv);
    dot(v, &hv).re / dot(v, v).re
}

fn residual(h: &SparseHermitian, v: &[C64], value: f64) -> f64 {
    let mut hv = vec![C64::new(0.0, 0.0); v.len()];
    h.apply(v, &mut hv);
    hv.iter().zip(v).map(|(a, b)| (a - value * b).norm_sqr()).sum::<f64>().sqrt()
}

fn deflated_dense(h: &SparseHermitian, psi: &[C64], count: usize) -> Vec<EigenPair> {
    let s = h.norm_bound() + 1.0;
    let mut m = h.to_dense();
    let p = DMatrix::from_column_slice(psi.len(), 1, psi);
    m += (&p * p.adjoint()) * C64::new(s, 0.0);
    dense::dense_eigh(m, count)
}

/// Spectral gap of the circuit Hamiltonian.
///
/// When the analytic ground state exists it fixes `E0` and is deflated from the
/// search, so the solver only has to find `E1` (and `E2`).
pub fn spectral_gap(spec: &CircuitSpec, opts: &EigenOptions) -> Result<GapResult> {
    let basis = build_basis(spec)?;
    let h = assemble(spec, &basis)?;
    let psi = construct_ground_state(spec, &basis).and_then(|s| s.normalized()).ok();
    gap_of(&h, psi.as_ref(), circuit_hash(spec), opts)
}

/// Gap of an assembled Hamiltonian, optionally deflating a known ground state.
pub fn gap_of(h: &SparseHermitian, psi: Option<&StateVector>, hash: String, opts: &EigenOptions) -> Result<GapResult> {
    let dim = h.dimension();
    let k = opts.k.max(2).min(dim);
    if dim < 2 {
        return Err(GsqcError::InvalidParameter(format!("spectrum of a {dim}-dimensional space has no gap")));
    }
    let tol = opts.tolerance(dim);
    let dense = dim <= opts.dense_threshold;
    let method = match (dense, opts.shift_invert) {
        (true, _) => Method::Dense,
        (false, false) => Method::Krylov,
        (false, true) => Method::KrylovShiftInvert,
    };
    let (mut values, mut residuals, mut matvecs) = (Vec::new(), Vec::new(), 0);
    let deflated = psi.is_some();
    match psi {
        Some(psi) => {
            let v = psi.amps();
            let e0 = rayleigh(h, v);
            values.push(e0);
            residuals.push(residual(h, v, e0));
            let excited = if dense {
                deflated_dense(h, v, k - 1)
            } else {
                let (pairs, n) = krylov_lowest(h, opts, k - 1, &[v.to_vec()])?;
                matvecs = n;
                pairs
            };
            for p in excited {
                residuals.push(residual(h, p.vector.amps(), p.value));
                values.push(p.value);
            }
        }
        None => {
            let pairs = if dense {
                dense_lowest(h, k, opts.dense_threshold)?
            } else {
                let (pairs, n) = krylov_lowest(h, opts, k, &[])?;
                matvecs = n;
                pairs
            };
            for p in pairs {
                residuals.push(residual(h, p.vector.amps(), p.value));
                values.push(p.value);
            }
        }
    }
    let e1 = values[1];
    let e1_multiplicity = values[1..].iter().filter(|v| (*v - e1).abs() <= opts.cluster_tol).count();
    Ok(GapResult {
        circuit_hash: hash,
        dimension: dim,
        e0: values[0],
        e1,
        e2: values.get(2).copied(),
        gap: e1 - values[0],
        residuals,
        method,
        deflated,
        e1_multiplicity,
        matvecs,
        tol,
    })
}
