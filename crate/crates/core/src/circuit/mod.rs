//! Static circuit layouts: qubit columns of typed rows joined by controlled couplings.
//!
//! Row 0 of every qubit is its boundary row. `rows[j - 1]` is the operation that
//! connects row `j - 1` to row `j`, so a qubit with `rows.len() == n - 1` has `n`
//! physical rows. Coupling partners are addressed by `(qubit id, row)` with the
//! row index local to that qubit.

mod gate;
mod generators;
mod schema;
mod teleport;
mod validate;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{GsqcError, Result};

pub use gate::{gate, Gate, GateMatrix};
pub use generators::{chain_circuit, qft_circuit, single_qubit_circuit, two_qubit_circuit, Terminal};
pub use schema::{circuit_hash, from_json, to_json};
pub use teleport::{
    insert_teleportation, logical_coupling_sequence, logical_wire, teleport_segment, GadgetTemplate, TeleportPolicy,
    GADGET_SEPARATOR,
};
pub use validate::{validate_circuit, Issue, IssueKind, ValidationReport};

/// Normalized amplitude pair over the two dots of a row.
pub type DotState = [C64; 2];

/// On-site term `E (I + a·σ)` on row 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    pub a: [f64; 3],
    #[serde(rename = "E")]
    pub strength: f64,
}

impl BoundaryCondition {
    pub const DEFAULT_STRENGTH: f64 = 10.0;

    pub fn new(a: [f64; 3]) -> Self {
        Self { a, strength: Self::DEFAULT_STRENGTH }
    }

    pub fn with_strength(mut self, strength: f64) -> Self {
        self.strength = strength;
        self
    }

    /// `E(I + σ_z)`: pins `|1⟩`.
    pub fn one() -> Self {
        Self::new([0.0, 0.0, 1.0])
    }

    /// `E(I − σ_z)`: pins `|0⟩`.
    pub fn zero() -> Self {
        Self::new([0.0, 0.0, -1.0])
    }

    /// `E(I − σ_x)`: pins `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        Self::new([-1.0, 0.0, 0.0])
    }

    pub fn norm(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// The 2×2 matrix `E (I + a·σ)`.
    pub fn matrix(&self) -> [[C64; 2]; 2] {
        let [ax, ay, az] = self.a;
        let e = self.strength;
        [
            [C64::new(e * (1.0 + az), 0.0), C64::new(e * ax, -e * ay)],
            [C64::new(e * ax, e * ay), C64::new(e * (1.0 - az), 0.0)],
        ]
    }
}

/// Zero-eigenvector of `I + a·σ`, phase fixed so the first nonzero component is
/// real and positive.
pub fn boundary_state(b: &BoundaryCondition) -> DotState {
    let [ax, ay, az] = b.a;
    // two algebraically equivalent forms; pick the better conditioned one
    let u = [C64::new(ax, -ay), C64::new(-1.0 - az, 0.0)];
    let w = [C64::new(1.0 - az, 0.0), C64::new(-ax, -ay)];
    let n2 = |v: &DotState| v[0].norm_sqr() + v[1].norm_sqr();
    let v = if n2(&u) >= n2(&w) { u } else { w };
    let norm = n2(&v).sqrt();
    let mut v = [v[0] / norm, v[1] / norm];
    let lead = if v[0].norm() > 1e-14 { v[0] } else { v[1] };
    let rot = lead.conj() / lead.norm();
    v = [v[0] * rot, v[1] * rot];
    for c in v.iter_mut() {
        if c.im.abs() < 1e-16 {
            c.im = 0.0;
        }
    }
    v
}

/// One row transition of a qubit column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum RowOp {
    Unitary { gate: Gate },
    Boost { lambda: f64 },
    Project { dot: u8, lambda: f64 },
    CoupledControl { partner: String, partner_row: usize },
    CoupledTarget { gate: Gate, partner: String, partner_row: usize },
}

impl RowOp {
    pub fn unitary(gate: Gate) -> Self {
        RowOp::Unitary { gate }
    }

    pub fn is_coupling(&self) -> bool {
        matches!(self, RowOp::CoupledControl { .. } | RowOp::CoupledTarget { .. })
    }

    pub fn is_terminal_kind(&self) -> bool {
        matches!(self, RowOp::Boost { .. } | RowOp::Project { .. })
    }

    pub fn lambda(&self) -> Option<f64> {
        match self {
            RowOp::Boost { lambda } | RowOp::Project { lambda, .. } => Some(*lambda),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RowOp::Unitary { .. } => "unitary",
            RowOp::Boost { .. } => "boost",
            RowOp::Project { .. } => "project",
            RowOp::CoupledControl { .. } => "coupled_control",
            RowOp::CoupledTarget { .. } => "coupled_target",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitSpec {
    pub id: String,
    pub boundary: BoundaryCondition,
    pub rows: Vec<RowOp>,
}

impl QubitSpec {
    pub fn new(id: impl Into<String>, boundary: BoundaryCondition, rows: Vec<RowOp>) -> Self {
        Self { id: id.into(), boundary, rows }
    }

    /// Number of physical rows including the boundary row.
    pub fn n_rows(&self) -> usize {
        self.rows.len() + 1
    }

    /// The operation landing on row `j` (`j >= 1`).
    pub fn op(&self, j: usize) -> Option<&RowOp> {
        if j == 0 {
            None
        } else {
            self.rows.get(j - 1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub epsilon: f64,
    pub qubits: Vec<QubitSpec>,
}

/// A resolved control/target pair. Qubit fields are indices into `CircuitSpec::qubits`.
#[derive(Clone, Debug, PartialEq)]
pub struct Coupling {
    pub control: usize,
    pub control_row: usize,
    pub target: usize,
    pub target_row: usize,
    pub gate: Gate,
}

/// One step of the row-ordered construction schedule.
#[derive(Clone, Debug, PartialEq)]
pub enum ScheduleStep {
    Single { qubit: usize, row: usize },
    Coupled(Coupling),
}

impl CircuitSpec {
    pub fn new(qubits: Vec<QubitSpec>) -> Self {
        Self { epsilon: 1.0, qubits }
    }

    pub fn qubit_index(&self, id: &str) -> Option<usize> {
        self.qubits.iter().position(|q| q.id == id)
    }

    pub fn qubit(&self, id: &str) -> Result<&QubitSpec> {
        self.qubits.iter().find(|q| q.id == id).ok_or_else(|| GsqcError::UnknownQubit(id.to_string()))
    }

    pub fn total_rows(&self) -> usize {
        self.qubits.iter().map(QubitSpec::n_rows).sum()
    }

    pub fn max_qubit_rows(&self) -> usize {
        self.qubits.iter().map(QubitSpec::n_rows).max().unwrap_or(0)
    }

    /// Copy with every boost and projection amplification set to `lambda`.
    pub fn with_lambda(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        for q in &mut out.qubits {
            for op in &mut q.rows {
                match op {
                    RowOp::Boost { lambda: l } | RowOp::Project { lambda: l, .. } => *l = lambda,
                    _ => {}
                }
            }
        }
        out
    }

    /// Largest amplification factor present, or 1 when there is none.
    pub fn max_lambda(&self) -> f64 {
        self.qubits.iter().flat_map(|q| q.rows.iter().filter_map(RowOp::lambda)).fold(1.0, f64::max)
    }

    /// All couplings, resolved from their target-side entries.
    pub fn couplings(&self) -> Result<Vec<Coupling>> {
        let mut out = Vec::new();
        for (t, q) in self.qubits.iter().enumerate() {
            for (k, op) in q.rows.iter().enumerate() {
                if let RowOp::CoupledTarget { gate, partner, partner_row } = op {
                    let c = self
                        .qubit_index(partner)
                        .ok_or_else(|| GsqcError::InvalidCircuit(format!("dangling coupling to `{partner}`")))?;
                    out.push(Coupling {
                        control: c,
                        control_row: *partner_row,
                        target: t,
                        target_row: k + 1,
                        gate: gate.clone(),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Orders all row transitions so that every step's upstream rows come first.
    /// A coupling is scheduled once both its rows are next in line on their qubits.
    pub fn schedule(&self) -> Result<Vec<ScheduleStep>> {
        let n = self.qubits.len();
        let mut next = vec![1usize; n];
        let total: usize = self.qubits.iter().map(|q| q.rows.len()).sum();
        let mut steps = Vec::with_capacity(total);
        let mut done = 0usize;
        while done < total {
            let mut progressed = false;
            for qi in 0..n {
                let q = &self.qubits[qi];
                while let Some(op) = q.op(next[qi]) {
                    let j = next[qi];
                    match op {
                        RowOp::CoupledControl { partner, partner_row } => {
                            let p = self.resolve_partner(qi, j, partner)?;
                            if next[p] != *partner_row {
                                break;
                            }
                            let gate = match self.qubits[p].op(*partner_row) {
                                Some(RowOp::CoupledTarget { gate, .. }) => gate.clone(),
                                _ => return Err(self.unmatched(qi, j)),
                            };
                            steps.push(ScheduleStep::Coupled(Coupling {
                                control: qi,
                                control_row: j,
                                target: p,
                                target_row: *partner_row,
                                gate,
                            }));
                            next[p] += 1;
                            done += 1;
                        }
                        RowOp::CoupledTarget { partner, partner_row, gate } => {
                            let p = self.resolve_partner(qi, j, partner)?;
                            if next[p] != *partner_row {
                                break;
                            }
                            if !matches!(self.qubits[p].op(*partner_row), Some(RowOp::CoupledControl { .. })) {
                                return Err(self.unmatched(qi, j));
                            }
                            steps.push(ScheduleStep::Coupled(Coupling {
                                control: p,
                                control_row: *partner_row,
                                target: qi,
                                target_row: j,
                                gate: gate.clone(),
                            }));
                            next[p] += 1;
                            done += 1;
                        }
                        _ => steps.push(ScheduleStep::Single { qubit: qi, row: j }),
                    }
                    next[qi] += 1;
                    done += 1;
                    progressed = true;
                }
            }
            if !progressed {
                return Err(GsqcError::InvalidCircuit(
                    "coupling rows form a cycle; no consistent upstream ordering".into(),
                ));
            }
        }
        Ok(steps)
    }

    fn resolve_partner(&self, qi: usize, j: usize, partner: &str) -> Result<usize> {
        match self.qubit_index(partner) {
            Some(p) if p != qi => Ok(p),
            Some(_) => {
                Err(GsqcError::InvalidCircuit(format!("qubit `{}` row {j} couples to itself", self.qubits[qi].id)))
            }
            None => Err(GsqcError::InvalidCircuit(format!(
                "dangling coupling from qubit `{}` row {j} to `{partner}`",
                self.qubits[qi].id
            ))),
        }
    }

    fn unmatched(&self, qi: usize, j: usize) -> GsqcError {
        GsqcError::InvalidCircuit(format!("coupling at qubit `{}` row {j} has no reciprocal entry", self.qubits[qi].id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(b: &BoundaryCondition, v: &DotState) -> f64 {
        let m = b.matrix();
        let r0 = m[0][0] * v[0] + m[0][1] * v[1];
        let r1 = m[1][0] * v[0] + m[1][1] * v[1];
        (r0.norm_sqr() + r1.norm_sqr()).sqrt() / b.strength
    }

    #[test]
    fn boundary_sigma_z_gives_one() {
        let v = boundary_state(&BoundaryCondition::one());
        assert_eq!(v, [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
    }

    #[test]
    fn boundary_minus_sigma_x_gives_plus() {
        let v = boundary_state(&BoundaryCondition::plus());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0] - C64::new(s, 0.0)).norm() < 1e-15);
        assert!((v[1] - C64::new(s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn boundary_minus_sigma_z_gives_zero() {
        let v = boundary_state(&BoundaryCondition::zero());
        assert_eq!(v, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    }

    #[test]
    fn boundary_residual_on_sphere() {
        for i in 0..50 {
            let th = 0.1 + i as f64 * 0.061;
            let ph = i as f64 * 0.37;
            let b = BoundaryCondition::new([th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]);
            let v = boundary_state(&b);
            assert!(residual(&b, &v) <= 1e-12);
            assert!(v[0].im == 0.0 && v[0].re >= 0.0);
        }
    }
}
