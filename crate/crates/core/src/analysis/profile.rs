use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::basis::BasisMap;
use crate::error::{GsqcError, Result};
use crate::groundstate::StateVector;

/// Marginal distribution of one qubit's electron over its rows.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RowProfile {
    pub qubit: String,
    pub probability: Vec<f64>,
    /// Leading eigenvector of the row's 2×2 dot density matrix, first nonzero
    /// component real and non-negative. Zero for unoccupied rows.
    pub dominant: Vec<[C64; 2]>,
}

impl RowProfile {
    pub fn amplitude(&self, row: usize) -> f64 {
        self.probability[row].sqrt()
    }
}

fn total(psi: &StateVector) -> Result<f64> {
    let t: f64 = psi.amps().iter().map(|a| a.norm_sqr()).sum();
    if t == 0.0 || !t.is_finite() {
        return Err(GsqcError::ZeroVector);
    }
    Ok(t)
}

fn check(psi: &StateVector, basis: &BasisMap) -> Result<()> {
    if psi.dimension() != basis.dimension() {
        return Err(GsqcError::DimensionMismatch { expected: basis.dimension(), got: psi.dimension() });
    }
    Ok(())
}

fn qubit(basis: &BasisMap, id: &str) -> Result<usize> {
    basis.qubit_index(id).ok_or_else(|| GsqcError::UnknownQubit(id.to_string()))
}

fn leading(rho: [[C64; 2]; 2]) -> [C64; 2] {
    let (a, d, b) = (rho[0][0].re, rho[1][1].re, rho[0][1]);
    if a + d == 0.0 {
        return [C64::new(0.0, 0.0); 2];
    }
    let mid = 0.5 * (a + d);
    let lam = mid + (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let v = if b.norm() == 0.0 {
        if a >= d {
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
        } else {
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
        }
    } else if a >= d {
        [C64::new(lam - d, 0.0), b.conj()]
    } else {
        [b, C64::new(lam - a, 0.0)]
    };
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let mut v = [v[0] / n, v[1] / n];
    let pivot = if v[0].norm() > 1e-14 { v[0] } else { v[1] };
    let phase = pivot.conj() / pivot.norm();
    v[0] *= phase;
    v[1] *= phase;
    v
}

/// Per-row probability of `qubit`, summed over dots and every other qubit.
pub fn row_profile(psi: &StateVector, basis: &BasisMap, qubit_id: &str) -> Result<RowProfile> {
    check(psi, basis)?;
    let q = qubit(basis, qubit_id)?;
    let scale = total(psi)?;
    let rows = basis.n_rows(q);
    let stride = basis.stride(q);
    let mut rho = vec![[[C64::new(0.0, 0.0); 2]; 2]; rows];
    let amps = psi.amps();
    for (i, a) in amps.iter().enumerate() {
        let d = basis.digit(i, q);
        let s = basis.site(q, d);
        let r = &mut rho[s.row];
        r[s.dot as usize][s.dot as usize] += a.norm_sqr();
        if s.dot == 0 {
            if let Some(other) = basis.local(q, s.row, 1) {
                let j = i + (other - d) * stride;
                r[0][1] += a * amps[j].conj();
            }
        }
    }
    let mut probability = Vec::with_capacity(rows);
    let mut dominant = Vec::with_capacity(rows);
    for mut r in rho {
        r[1][0] = r[0][1].conj();
        probability.push((r[0][0].re + r[1][1].re) / scale);
        dominant.push(leading(r));
    }
    Ok(RowProfile { qubit: qubit_id.to_string(), probability, dominant })
}

/// Norm of the part of `psi` with `qubit`'s electron on a row strictly above
/// (upstream of) `cut_row`.
pub fn upstream_weight(psi: &StateVector, basis: &BasisMap, qubit_id: &str, cut_row: usize) -> Result<f64> {
    let q = qubit(basis, qubit_id)?;
    let rows = basis.n_rows(q);
    if cut_row >= rows {
        return Err(GsqcError::InvalidCut { cut: cut_row, rows });
    }
    let profile = row_profile(psi, basis, qubit_id)?;
    Ok(profile.probability[..cut_row].iter().sum::<f64>().sqrt())
}

/// Upstream weight above `cut_row` divided by the qubit's final-row amplitude.
pub fn upstream_to_final_ratio(psi: &StateVector, basis: &BasisMap, qubit_id: &str, cut_row: usize) -> Result<f64> {
    let up = upstream_weight(psi, basis, qubit_id, cut_row)?;
    let profile = row_profile(psi, basis, qubit_id)?;
    Ok(up / profile.amplitude(profile.probability.len() - 1))
}

/// Probability that every qubit's electron sits on its final row.
pub fn final_row_success_probability(psi: &StateVector, basis: &BasisMap) -> Result<f64> {
    check(psi, basis)?;
    let scale = total(psi)?;
    let nq = basis.n_qubits();
    let finals: Vec<usize> = (0..nq).map(|q| basis.n_rows(q) - 1).collect();
    let hit: f64 = psi
        .amps()
        .iter()
        .enumerate()
        .filter(|(i, _)| (0..nq).all(|q| basis.site(q, basis.digit(*i, q)).row == finals[q]))
        .map(|(_, a)| a.norm_sqr())
        .sum();
    Ok(hit / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build_basis;
    use crate::circuit::{single_qubit_circuit, BoundaryCondition, RowOp};
    use crate::groundstate::construct_ground_state;

    #[test]
    fn dominant_state_follows_gates() {
        let mut c = single_qubit_circuit(3, None, BoundaryCondition::zero()).unwrap();
        c.qubits[0].rows[0] = RowOp::unitary(crate::circuit::Gate::H);
        let b = build_basis(&c).unwrap();
        let psi = construct_ground_state(&c, &b).unwrap();
        let p = row_profile(&psi, &b, "q0").unwrap();
        assert!((p.dominant[0][0].re - 1.0).abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.dominant[1][0].re - h).abs() < 1e-12 && (p.dominant[1][1].re - h).abs() < 1e-12);
        assert!((p.probability.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cut_validation() {
        let c = single_qubit_circuit(3, None, BoundaryCondition::zero()).unwrap();
        let b = build_basis(&c).unwrap();
        let psi = construct_ground_state(&c, &b).unwrap();
        assert_eq!(upstream_weight(&psi, &b, "q0", 0).unwrap(), 0.0);
        assert!(matches!(upstream_weight(&psi, &b, "q0", 3), Err(GsqcError::InvalidCut { .. })));
        assert!(matches!(row_profile(&psi, &b, "zz"), Err(GsqcError::UnknownQubit(_))));
    }
}
