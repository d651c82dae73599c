//! Analytic zero-energy ground state of a circuit Hamiltonian.
//!
//! Starting from every column in its boundary state on row 0, each scheduled
//! row transition multiplies the state by its propagation factor:
//!
//! * unitary `U`:     `1 + C†_j U C_{j-1}`
//! * boost `λ`:       `1 + λ C†_j C_{j-1}`
//! * project `γ, λ`:  `1 + λ c†_{j,γ} c_{j-1,γ}`
//! * coupling:        `1 + c†_{α,0}c_{α,0}(1 + C†_β C_β) + c†_{α,1}c_{α,1}(1 + C†_β U C_β)`
//!
//! Each factor only writes configurations whose moved electron sits on a row no
//! earlier factor has reached, so the update is done in place.

use std::io::{self, Write};

use num_complex::Complex64 as C64;

use crate::basis::BasisMap;
use crate::circuit::{boundary_state, CircuitSpec, RowOp, ScheduleStep};
use crate::error::{GsqcError, Result};
use crate::hamiltonian::{emitters, SparseHermitian};

/// Complex amplitudes over basis ordinals. The represented vector is
/// `amps · 2^log2_scale`; the scale only matters when comparing norms across
/// differently rescaled vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    log2_scale: i32,
}

const RESCALE_BITS: i32 = 400;

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Self {
        Self { amps, log2_scale: 0 }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![C64::new(0.0, 0.0); dim])
    }

    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn log2_scale(&self) -> i32 {
        self.log2_scale
    }

    /// Norm of the stored amplitudes (without the power-of-two scale).
    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    pub fn is_finite(&self) -> bool {
        self.amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }

    pub fn normalized(&self) -> Result<StateVector> {
        let n = self.norm();
        if n.is_nan() || n <= 0.0 {
            return Err(GsqcError::ZeroVector);
        }
        Ok(StateVector::new(self.amps.iter().map(|a| a / n).collect()))
    }

    /// `ordinal re im` lines for every amplitude above `threshold`, preceded by the basis legend.
    pub fn write_dump<W: Write>(&self, basis: &BasisMap, threshold: f64, mut w: W) -> io::Result<()> {
        w.write_all(basis.legend().as_bytes())?;
        writeln!(w, "# dimension {} log2_scale {}", self.amps.len(), self.log2_scale)?;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() > threshold {
                writeln!(w, "{i} {:.17e} {:.17e}", a.re, a.im)?;
            }
        }
        Ok(())
    }

    fn rescale_if_needed(&mut self) {
        let max = self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if max > 2f64.powi(RESCALE_BITS) {
            let f = 2f64.powi(-RESCALE_BITS);
            self.amps.iter_mut().for_each(|a| *a *= f);
            self.log2_scale += RESCALE_BITS;
        }
    }
}

pub(crate) fn norm(x: &[C64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Builds the product-formula state without checking it against the Hamiltonian.
pub fn product_state(spec: &CircuitSpec, basis: &BasisMap) -> Result<StateVector> {
    if basis.n_qubits() != spec.qubits.len() {
        return Err(GsqcError::BasisMismatch("qubit count differs".into()));
    }
    let dim = basis.dimension();
    let nq = spec.qubits.len();
    let mut psi = StateVector::zeros(dim);

    // boundary product state on row 0
    let starts: Vec<_> = spec.qubits.iter().map(|q| boundary_state(&q.boundary)).collect();
    for mask in 0..(1usize << nq) {
        let mut ordinal = 0;
        let mut amp = C64::new(1.0, 0.0);
        for (q, v) in starts.iter().enumerate() {
            let d = ((mask >> q) & 1) as u8;
            amp *= v[d as usize];
            let local = basis.local(q, 0, d).ok_or_else(|| GsqcError::BasisMismatch("boundary site missing".into()))?;
            ordinal += local * basis.stride(q);
        }
        psi.amps[ordinal] = amp;
    }

    let site = |q: usize, row: usize, dot: u8| {
        basis.local(q, row, dot).ok_or_else(|| {
            GsqcError::BasisMismatch(format!("site ({row}, {dot}) of qubit `{}` not in basis", spec.qubits[q].id))
        })
    };

    for step in spec.schedule()? {
        match step {
            ScheduleStep::Single { qubit: q, row: j } => {
                let op = spec.qubits[q].op(j).expect("scheduled row exists");
                let stride = basis.stride(q);
                let from = [basis.local(q, j - 1, 0), basis.local(q, j - 1, 1)];
                match op {
                    RowOp::Unitary { gate } => {
                        let u = gate.matrix();
                        let to = [site(q, j, 0)?, site(q, j, 1)?];
                        for i in 0..dim {
                            let s = basis.digit(i, q);
                            let Some(b) = from.iter().position(|f| *f == Some(s)) else {
                                continue;
                            };
                            let amp = psi.amps[i];
                            if amp == C64::new(0.0, 0.0) {
                                continue;
                            }
                            for (a, &t) in to.iter().enumerate() {
                                psi.amps[i - s * stride + t * stride] += u.get(a, b) * amp;
                            }
                        }
                    }
                    RowOp::Boost { lambda } | RowOp::Project { lambda, .. } => {
                        let dots: &[u8] = match op {
                            RowOp::Project { dot, .. } => std::slice::from_ref(dot),
                            _ => &[0, 1],
                        };
                        if let RowOp::Project { dot, .. } = op {
                            check_projection(spec, basis, &psi, q, j, *dot)?;
                        }
                        for &d in dots {
                            let (f, t) = (site(q, j - 1, d)?, site(q, j, d)?);
                            for i in 0..dim {
                                if basis.digit(i, q) == f {
                                    let amp = psi.amps[i];
                                    psi.amps[i - f * stride + t * stride] += *lambda * amp;
                                }
                            }
                        }
                    }
                    RowOp::CoupledControl { .. } | RowOp::CoupledTarget { .. } => {
                        unreachable!("couplings are scheduled as pairs")
                    }
                }
            }
            ScheduleStep::Coupled(c) => {
                let (a, b) = (c.control, c.target);
                let (sa, sb) = (basis.stride(a), basis.stride(b));
                let a_from = [site(a, c.control_row - 1, 0)?, site(a, c.control_row - 1, 1)?];
                let a_to = [site(a, c.control_row, 0)?, site(a, c.control_row, 1)?];
                let b_from = [basis.local(b, c.target_row - 1, 0), basis.local(b, c.target_row - 1, 1)];
                let b_to = [site(b, c.target_row, 0)?, site(b, c.target_row, 1)?];
                let gates = [crate::circuit::GateMatrix::identity(), c.gate.matrix()];
                for i in 0..dim {
                    let da = basis.digit(i, a);
                    let Some(d) = a_from.iter().position(|&f| f == da) else {
                        continue;
                    };
                    let amp = psi.amps[i];
                    if amp == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let moved = i - da * sa + a_to[d] * sa;
                    psi.amps[moved] += amp;
                    let db = basis.digit(i, b);
                    if let Some(bb) = b_from.iter().position(|f| *f == Some(db)) {
                        for (ta, &t) in b_to.iter().enumerate() {
                            let g = gates[d].get(ta, bb);
                            if g != C64::new(0.0, 0.0) {
                                psi.amps[moved - db * sb + t * sb] += g * amp;
                            }
                        }
                    }
                }
            }
        }
        psi.rescale_if_needed();
    }
    Ok(psi)
}

fn check_projection(
    spec: &CircuitSpec,
    basis: &BasisMap,
    psi: &StateVector,
    q: usize,
    j: usize,
    dot: u8,
) -> Result<()> {
    let mut w = [0.0f64; 2];
    for (i, a) in psi.amps.iter().enumerate() {
        let s = basis.site(q, basis.digit(i, q));
        if s.row == j - 1 {
            w[s.dot as usize] += a.norm_sqr();
        }
    }
    let total = w[0] + w[1];
    if total > 0.0 {
        let overlap = (w[(dot as usize).min(1)] / total).sqrt();
        if overlap <= 1e-8 {
            return Err(GsqcError::ProjectionOrthogonal { qubit: spec.qubits[q].id.clone(), row: j, overlap });
        }
    }
    Ok(())
}

/// Tolerance on `‖Hψ₀‖ / ‖ψ₀‖` in units of ε.
pub const GROUND_STATE_TOL: f64 = 1e-10;

/// Product-formula ground state, verified to be annihilated by the Hamiltonian.
pub fn construct_ground_state(spec: &CircuitSpec, basis: &BasisMap) -> Result<StateVector> {
    let psi = product_state(spec, basis)?;
    let residual = term_residuals(spec, basis, &psi)?.iter().map(|(_, r)| r * r).sum::<f64>().sqrt();
    if residual.is_nan() || residual > GROUND_STATE_TOL {
        return Err(GsqcError::GroundStateResidual { residual });
    }
    Ok(psi)
}

/// `‖T ψ‖ / ‖ψ‖` for every emitted term `T`, labelled.
pub fn term_residuals(spec: &CircuitSpec, basis: &BasisMap, psi: &StateVector) -> Result<Vec<(String, f64)>> {
    let n = psi.norm();
    if n.is_nan() || n <= 0.0 {
        return Err(GsqcError::ZeroVector);
    }
    let mut y = vec![C64::new(0.0, 0.0); psi.dimension()];
    emitters(spec, basis)?
        .into_iter()
        .map(|e| {
            y.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            e.apply_add(basis, psi.amps(), &mut y);
            Ok((e.label, norm(&y) / n))
        })
        .collect()
}

/// `‖H ψ‖ / ‖ψ‖`.
pub fn residual_norm(h: &SparseHermitian, psi: &StateVector) -> Result<f64> {
    let n = psi.norm();
    if n.is_nan() || n <= 0.0 {
        return Err(GsqcError::ZeroVector);
    }
    Ok(norm(&h.matvec(psi.amps())?) / n)
}

/// Rayleigh quotient `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩` in units of ε.
pub fn residual_energy(h: &SparseHermitian, psi: &StateVector) -> Result<f64> {
    let n2 = psi.norm().powi(2);
    if n2.is_nan() || n2 <= 0.0 {
        return Err(GsqcError::ZeroVector);
    }
    let hx = h.matvec(psi.amps())?;
    Ok(dot(psi.amps(), &hx).re / n2)
}
