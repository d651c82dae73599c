//! Splicing logical wires through post-selected teleportation gadgets.
//!
//! A cut of wire `w` after row `r` keeps rows `1..=r` on `w` (the gadget input),
//! adds an ancilla `w~m<n>` and an output `w~<n>` that carries rows `r+1..` of
//! the original wire. With the default template:
//!
//! ```text
//! input  w      : ... row r | C(w→m) | H | P(0)
//! ancilla w~m<n>: H | C(m→out) | X-target(from w) | P(0)
//! output w~<n>  : X-target(from m) | rows r+1 ..
//! ```
//!
//! Post-selecting `|0⟩` on input and ancilla teleports the wire state onto the
//! output without Pauli correction.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{GsqcError, Result};

use super::{BoundaryCondition, CircuitSpec, Gate, QubitSpec, RowOp, Terminal};

/// Where gadgets are spliced into each original wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TeleportPolicy {
    /// After every coupling row.
    AfterEveryCoupling,
    /// Between each pair of successive coupling rows on a wire.
    BetweenCouplings,
    /// Immediately before and after every coupling row.
    AroundEveryCoupling,
}

impl std::str::FromStr for TeleportPolicy {
    type Err = GsqcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "after-every-coupling" | "after" => Ok(Self::AfterEveryCoupling),
            "between-couplings" | "between" => Ok(Self::BetweenCouplings),
            "around-every-coupling" | "around" => Ok(Self::AroundEveryCoupling),
            other => Err(GsqcError::InvalidParameter(format!("unknown teleportation policy `{other}`"))),
        }
    }
}

/// Row layout of one gadget.
#[derive(Clone, Debug, PartialEq)]
pub struct GadgetTemplate {
    pub name: String,
    pub ancilla_boundary: BoundaryCondition,
    pub output_boundary: BoundaryCondition,
    /// Ancilla rows before it entangles with the output.
    pub ancilla_pre: Vec<Gate>,
    /// Ancilla rows between the two couplings.
    pub ancilla_mid: Vec<Gate>,
    /// Output rows before the entangling coupling.
    pub output_pre: Vec<Gate>,
    /// Input rows after the input→ancilla coupling.
    pub input_post: Vec<Gate>,
    pub input_terminal: Terminal,
    pub ancilla_terminal: Terminal,
    /// Amplification of the gadget terminals; `None` takes the circuit's largest λ.
    pub lambda: Option<f64>,
}

impl Default for GadgetTemplate {
    fn default() -> Self {
        Self {
            name: "post-selected".into(),
            ancilla_boundary: BoundaryCondition::zero(),
            output_boundary: BoundaryCondition::zero(),
            ancilla_pre: vec![Gate::H],
            ancilla_mid: Vec::new(),
            output_pre: Vec::new(),
            input_post: vec![Gate::H],
            input_terminal: Terminal::Project(0),
            ancilla_terminal: Terminal::Project(0),
            lambda: None,
        }
    }
}

/// Separator between a wire id and the suffix of qubits spliced out of it.
pub const GADGET_SEPARATOR: char = '~';

/// Returns a new circuit where every wire segment selected by `policy` is routed
/// through a gadget built from `template`.
pub fn insert_teleportation(
    spec: &CircuitSpec,
    policy: TeleportPolicy,
    template: &GadgetTemplate,
) -> Result<CircuitSpec> {
    spec.schedule()?;
    let lambda = template.lambda.unwrap_or_else(|| spec.max_lambda());

    let mut cuts: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for q in &spec.qubits {
        let coupling_rows: Vec<usize> =
            q.rows.iter().enumerate().filter(|(_, op)| op.is_coupling()).map(|(k, _)| k + 1).collect();
        let mut rs: Vec<usize> = match policy {
            TeleportPolicy::AfterEveryCoupling => coupling_rows.clone(),
            TeleportPolicy::BetweenCouplings => {
                coupling_rows.iter().take(coupling_rows.len().saturating_sub(1)).copied().collect()
            }
            TeleportPolicy::AroundEveryCoupling => coupling_rows.iter().flat_map(|&c| [c.wrapping_sub(1), c]).collect(),
        };
        rs.sort_unstable();
        rs.dedup();
        for &r in &rs {
            // both the kept and the moved segment must hold at least one row
            if r == 0 || r == usize::MAX || r >= q.rows.len() {
                return Err(GsqcError::SegmentTooShort { qubit: q.id.clone(), row: r.wrapping_add(1) });
            }
        }
        if !rs.is_empty() {
            cuts.insert(q.id.clone(), rs);
        }
    }

    let mut out = spec.clone();
    let mut counter = 0usize;
    for q in &spec.qubits {
        let Some(rs) = cuts.get(&q.id) else { continue };
        // cutting from the bottom up keeps row numbers of the remaining cuts valid
        for &r in rs.iter().rev() {
            splice(&mut out, &q.id, r, counter, template, lambda);
            counter += 1;
        }
    }
    Ok(out)
}

/// Routes `wire` through one gadget placed after its row `row`.
pub fn teleport_segment(spec: &CircuitSpec, wire: &str, row: usize, template: &GadgetTemplate) -> Result<CircuitSpec> {
    spec.schedule()?;
    let q = spec.qubit(wire)?;
    if row == 0 || row >= q.rows.len() {
        return Err(GsqcError::SegmentTooShort { qubit: wire.to_string(), row: row + 1 });
    }
    let lambda = template.lambda.unwrap_or_else(|| spec.max_lambda());
    let n = spec.qubits.iter().filter(|q| q.id.contains(GADGET_SEPARATOR)).count() / 2;
    let mut out = spec.clone();
    splice(&mut out, wire, row, n, template, lambda);
    Ok(out)
}

fn splice(spec: &mut CircuitSpec, wire: &str, r: usize, n: usize, t: &GadgetTemplate, lambda: f64) {
    let qi = spec.qubit_index(wire).expect("wire exists");
    let m_id = format!("{wire}{GADGET_SEPARATOR}m{n}");
    let b_id = format!("{wire}{GADGET_SEPARATOR}{n}");

    let input = &mut spec.qubits[qi];
    let downstream: Vec<RowOp> = input.rows.split_off(r);

    // ancilla row numbers
    let m_ctrl_row = t.ancilla_pre.len() + 1;
    let m_tgt_row = m_ctrl_row + t.ancilla_mid.len() + 1;
    // output row numbers
    let b_tgt_row = t.output_pre.len() + 1;
    // input row number of the input→ancilla coupling
    let a_ctrl_row = r + 1;

    input.rows.push(RowOp::CoupledControl { partner: m_id.clone(), partner_row: m_tgt_row });
    input.rows.extend(t.input_post.iter().cloned().map(RowOp::unitary));
    input.rows.push(t.input_terminal.op(lambda));

    let mut m_rows: Vec<RowOp> = t.ancilla_pre.iter().cloned().map(RowOp::unitary).collect();
    m_rows.push(RowOp::CoupledControl { partner: b_id.clone(), partner_row: b_tgt_row });
    m_rows.extend(t.ancilla_mid.iter().cloned().map(RowOp::unitary));
    m_rows.push(RowOp::CoupledTarget { gate: Gate::X, partner: wire.to_string(), partner_row: a_ctrl_row });
    m_rows.push(t.ancilla_terminal.op(lambda));

    let mut b_rows: Vec<RowOp> = t.output_pre.iter().cloned().map(RowOp::unitary).collect();
    b_rows.push(RowOp::CoupledTarget { gate: Gate::X, partner: m_id.clone(), partner_row: m_ctrl_row });
    b_rows.extend(downstream);

    // rows moved to the output shift by this much
    let shift = b_tgt_row as isize - r as isize;
    for q in spec.qubits.iter_mut() {
        for op in q.rows.iter_mut() {
            match op {
                RowOp::CoupledControl { partner, partner_row } | RowOp::CoupledTarget { partner, partner_row, .. }
                    if partner == wire && *partner_row > r =>
                {
                    *partner = b_id.clone();
                    *partner_row = (*partner_row as isize + shift) as usize;
                }
                _ => {}
            }
        }
    }

    spec.qubits.push(QubitSpec::new(m_id, t.ancilla_boundary.clone(), m_rows));
    spec.qubits.push(QubitSpec::new(b_id, t.output_boundary.clone(), b_rows));
}

/// Logical wire a physical qubit belongs to, or `None` for gadget ancillas.
pub fn logical_wire(id: &str) -> Option<&str> {
    match id.split_once(GADGET_SEPARATOR) {
        None => Some(id),
        Some((_, suffix)) if suffix.starts_with('m') => None,
        Some((wire, _)) => Some(wire),
    }
}

/// Per logical wire, the ordered couplings it takes part in with other logical
/// wires: `(partner wire, is_control, gate name)`. Gadget couplings are skipped.
pub fn logical_coupling_sequence(spec: &CircuitSpec) -> BTreeMap<String, Vec<(String, bool, String)>> {
    let mut out: BTreeMap<String, Vec<(String, bool, String)>> = BTreeMap::new();
    // walk every wire's physical pieces in splice order: original, then outputs by row order of the chain
    let mut pieces: BTreeMap<String, Vec<&QubitSpec>> = BTreeMap::new();
    for q in &spec.qubits {
        if let Some(w) = logical_wire(&q.id) {
            pieces.entry(w.to_string()).or_default().push(q);
        }
    }
    for (wire, qs) in pieces {
        // order pieces by following output couplings: each piece's successor is the
        // output whose entangling ancilla is controlled by this piece
        let mut ordered: Vec<&QubitSpec> = Vec::new();
        let mut current = qs.iter().copied().find(|q| q.id == wire);
        while let Some(q) = current {
            ordered.push(q);
            current = successor(spec, q);
        }
        let seq = out.entry(wire).or_default();
        for q in ordered {
            for op in &q.rows {
                let (partner, is_control, gate) = match op {
                    RowOp::CoupledControl { partner, partner_row } => {
                        let gate = match spec.qubit(partner).ok().and_then(|p| p.op(*partner_row)) {
                            Some(RowOp::CoupledTarget { gate, .. }) => gate.name(),
                            _ => "?".into(),
                        };
                        (partner, true, gate)
                    }
                    RowOp::CoupledTarget { partner, gate, .. } => (partner, false, gate.name()),
                    _ => continue,
                };
                if let Some(pw) = logical_wire(partner) {
                    seq.push((pw.to_string(), is_control, gate));
                }
            }
        }
    }
    out
}

fn successor<'a>(spec: &'a CircuitSpec, q: &QubitSpec) -> Option<&'a QubitSpec> {
    // input controls ancilla m; m controls the output
    q.rows.iter().rev().find_map(|op| match op {
        RowOp::CoupledControl { partner, .. } if logical_wire(partner).is_none() => {
            let m = spec.qubit(partner).ok()?;
            m.rows.iter().find_map(|mop| match mop {
                RowOp::CoupledControl { partner, .. } => spec.qubit(partner).ok(),
                _ => None,
            })
        }
        _ => None,
    })
}
