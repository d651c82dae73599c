use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::{boundary_state, CircuitSpec, DotState, RowOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    NonPositiveEpsilon,
    EmptyCircuit,
    DuplicateQubitId,
    EmptyQubit,
    BoundaryNotNormalized,
    NonPositiveBoundaryStrength,
    NonUnitaryGate,
    LambdaBelowOne,
    InvalidProjectionDot,
    DanglingCoupling,
    SelfCoupling,
    CouplingRowOutOfRange,
    UnmatchedCoupling,
    CyclicCouplings,
    // warnings
    ProjectionNotTerminal,
    ProjectionOrthogonal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Issue {
    pub kind: IssueKind,
    pub qubit: Option<String>,
    pub row: Option<usize>,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.qubit, self.row) {
            (Some(q), Some(r)) => write!(f, "qubit `{q}` row {r}: {}", self.message),
            (Some(q), None) => write!(f, "qubit `{q}`: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: IssueKind) -> bool {
        self.violations.iter().chain(&self.warnings).any(|i| i.kind == kind)
    }

    fn violation(&mut self, kind: IssueKind, qubit: Option<&str>, row: Option<usize>, message: String) {
        self.violations.push(Issue { kind, qubit: qubit.map(str::to_string), row, message });
    }

    fn warning(&mut self, kind: IssueKind, qubit: Option<&str>, row: Option<usize>, message: String) {
        self.warnings.push(Issue { kind, qubit: qubit.map(str::to_string), row, message });
    }
}

const UNIT_TOL: f64 = 1e-12;

/// Checks every structural invariant of a circuit. Never fails; problems are
/// reported as violations (fatal) or warnings.
pub fn validate_circuit(spec: &CircuitSpec) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if spec.epsilon.is_nan() || spec.epsilon <= 0.0 {
        rep.violation(
            IssueKind::NonPositiveEpsilon,
            None,
            None,
            format!("epsilon must be positive, got {}", spec.epsilon),
        );
    }
    if spec.qubits.is_empty() {
        rep.violation(IssueKind::EmptyCircuit, None, None, "circuit has no qubits".into());
    }
    let mut seen = HashSet::new();
    for q in &spec.qubits {
        if !seen.insert(q.id.as_str()) {
            rep.violation(IssueKind::DuplicateQubitId, Some(&q.id), None, "duplicate qubit id".into());
        }
    }

    let mut coupling_ok = true;
    for (qi, q) in spec.qubits.iter().enumerate() {
        let id = Some(q.id.as_str());
        if q.rows.is_empty() {
            rep.violation(IssueKind::EmptyQubit, id, None, "qubit has no rows beyond its boundary".into());
        }
        let norm = q.boundary.norm();
        if (norm * norm - 1.0).abs() > UNIT_TOL {
            rep.violation(
                IssueKind::BoundaryNotNormalized,
                id,
                Some(0),
                format!("boundary vector ‖a‖≠1 (‖a‖ = {norm})"),
            );
        }
        if q.boundary.strength.is_nan() || q.boundary.strength <= 0.0 {
            rep.violation(
                IssueKind::NonPositiveBoundaryStrength,
                id,
                Some(0),
                format!("boundary strength E must be positive, got {}", q.boundary.strength),
            );
        }
        let last = q.rows.len();
        for (k, op) in q.rows.iter().enumerate() {
            let j = k + 1;
            match op {
                RowOp::Unitary { gate } | RowOp::CoupledTarget { gate, .. } => {
                    let d = gate.matrix().unitarity_defect();
                    if d > UNIT_TOL {
                        rep.violation(
                            IssueKind::NonUnitaryGate,
                            id,
                            Some(j),
                            format!("gate {gate} is not unitary (defect {d:.2e})"),
                        );
                    }
                }
                _ => {}
            }
            if let Some(lambda) = op.lambda() {
                if !lambda.is_finite() || lambda < 1.0 {
                    rep.violation(
                        IssueKind::LambdaBelowOne,
                        id,
                        Some(j),
                        format!("amplification λ must be ≥ 1, got {lambda}"),
                    );
                }
            }
            if let RowOp::Project { dot, .. } = op {
                if *dot > 1 {
                    rep.violation(
                        IssueKind::InvalidProjectionDot,
                        id,
                        Some(j),
                        format!("projection dot must be 0 or 1, got {dot}"),
                    );
                }
                if j != last {
                    rep.warning(
                        IssueKind::ProjectionNotTerminal,
                        id,
                        Some(j),
                        "projection row is not the last row".into(),
                    );
                }
            }
            let (partner, partner_row, want_control) = match op {
                RowOp::CoupledControl { partner, partner_row } => (partner, *partner_row, false),
                RowOp::CoupledTarget { partner, partner_row, .. } => (partner, *partner_row, true),
                _ => continue,
            };
            let Some(pi) = spec.qubit_index(partner) else {
                coupling_ok = false;
                rep.violation(
                    IssueKind::DanglingCoupling,
                    id,
                    Some(j),
                    format!("dangling coupling: no qubit `{partner}`"),
                );
                continue;
            };
            if pi == qi {
                coupling_ok = false;
                rep.violation(IssueKind::SelfCoupling, id, Some(j), "coupling names its own qubit".into());
                continue;
            }
            let p = &spec.qubits[pi];
            let reciprocal = match p.op(partner_row) {
                None => {
                    coupling_ok = false;
                    rep.violation(
                        IssueKind::CouplingRowOutOfRange,
                        id,
                        Some(j),
                        format!(
                            "partner row {partner_row} does not exist on qubit `{partner}` (rows 1..={})",
                            p.rows.len()
                        ),
                    );
                    continue;
                }
                Some(RowOp::CoupledControl { partner: back, partner_row: back_row }) if want_control => {
                    back == &q.id && *back_row == j
                }
                Some(RowOp::CoupledTarget { partner: back, partner_row: back_row, .. }) if !want_control => {
                    back == &q.id && *back_row == j
                }
                Some(_) => false,
            };
            if !reciprocal {
                coupling_ok = false;
                rep.violation(
                    IssueKind::UnmatchedCoupling,
                    id,
                    Some(j),
                    format!("coupling with `{partner}` row {partner_row} is not mirrored by a matching entry"),
                );
            }
        }
    }

    if coupling_ok && !spec.qubits.is_empty() {
        if let Err(e) = spec.schedule() {
            rep.violation(IssueKind::CyclicCouplings, None, None, e.to_string());
        }
    }

    if rep.violations.is_empty() {
        projection_overlaps(spec, &mut rep);
    }
    rep
}

/// Tracks each column's dot state through single-qubit rows. Once a coupling
/// targets the column the state is no longer a product and tracking stops.
fn projection_overlaps(spec: &CircuitSpec, rep: &mut ValidationReport) {
    for q in &spec.qubits {
        let mut state: Option<DotState> = Some(boundary_state(&q.boundary));
        for (k, op) in q.rows.iter().enumerate() {
            match op {
                RowOp::Unitary { gate } => {
                    state = state.map(|s| gate.matrix().apply(s));
                }
                RowOp::Boost { .. } | RowOp::CoupledControl { .. } => {}
                RowOp::CoupledTarget { .. } => state = None,
                RowOp::Project { dot, .. } => {
                    if let Some(s) = state {
                        let overlap = s[(*dot as usize).min(1)].norm();
                        if overlap < 1e-8 {
                            rep.warning(
                                IssueKind::ProjectionOrthogonal,
                                Some(&q.id),
                                Some(k + 1),
                                format!("incoming state is orthogonal to projected dot {dot} (overlap {overlap:.1e})"),
                            );
                        }
                        let mut p = [C64::new(0.0, 0.0); 2];
                        p[(*dot as usize).min(1)] = s[(*dot as usize).min(1)];
                        state = Some(p);
                    }
                }
            }
        }
    }
}
