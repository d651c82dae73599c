//! Circuit families used throughout the crate and the CLI presets.

use crate::error::{GsqcError, Result};

use super::{
    insert_teleportation, BoundaryCondition, CircuitSpec, GadgetTemplate, Gate, QubitSpec, RowOp, TeleportPolicy,
};

/// Kind of amplifying row that closes a column.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Terminal {
    Boost,
    Project(u8),
}

impl Terminal {
    pub fn op(self, lambda: f64) -> RowOp {
        match self {
            Terminal::Boost => RowOp::Boost { lambda },
            Terminal::Project(dot) => RowOp::Project { dot, lambda },
        }
    }
}

/// Appends rows column by column; couplings take the next free row on both columns.
pub(crate) struct Builder {
    qubits: Vec<QubitSpec>,
}

impl Builder {
    pub(crate) fn new(boundaries: Vec<BoundaryCondition>) -> Self {
        let qubits =
            boundaries.into_iter().enumerate().map(|(i, b)| QubitSpec::new(format!("q{i}"), b, Vec::new())).collect();
        Self { qubits }
    }

    pub(crate) fn push(&mut self, q: usize, op: RowOp) -> &mut Self {
        self.qubits[q].rows.push(op);
        self
    }

    pub(crate) fn identity(&mut self, q: usize, count: usize) -> &mut Self {
        for _ in 0..count {
            self.push(q, RowOp::unitary(Gate::I));
        }
        self
    }

    pub(crate) fn couple(&mut self, control: usize, target: usize, gate: Gate) -> &mut Self {
        let control_row = self.qubits[control].rows.len() + 1;
        let target_row = self.qubits[target].rows.len() + 1;
        let (cid, tid) = (self.qubits[control].id.clone(), self.qubits[target].id.clone());
        self.push(control, RowOp::CoupledControl { partner: tid, partner_row: target_row });
        self.push(target, RowOp::CoupledTarget { gate, partner: cid, partner_row: control_row })
    }

    pub(crate) fn finish(self) -> CircuitSpec {
        CircuitSpec::new(self.qubits)
    }
}

/// A single column of identity rows, optionally closed by `terminal` on its last row.
pub fn single_qubit_circuit(
    n_rows: usize,
    terminal: Option<RowOp>,
    boundary: BoundaryCondition,
) -> Result<CircuitSpec> {
    if n_rows < 2 {
        return Err(GsqcError::InvalidParameter(format!("single qubit needs at least 2 rows, got {n_rows}")));
    }
    if let Some(op) = &terminal {
        if op.is_coupling() {
            return Err(GsqcError::InvalidParameter("terminal row of a single qubit cannot be a coupling".into()));
        }
    }
    let mut rows = vec![RowOp::unitary(Gate::I); n_rows - 1];
    if let Some(op) = terminal {
        rows[n_rows - 2] = op;
    }
    Ok(CircuitSpec::new(vec![QubitSpec::new("q0", boundary, rows)]))
}

/// Control `q0` and target `q1` with one CNOT coupling at row `rows / 2` and the
/// requested terminals on row `rows - 1`. Boundaries are `10ε(I − σ_x)` on the
/// control and `10ε(I + σ_z)` on the target.
pub fn two_qubit_circuit(rows: usize, lambda: f64, control: Terminal, target: Terminal) -> Result<CircuitSpec> {
    if rows < 3 {
        return Err(GsqcError::InvalidParameter(format!("two-qubit circuit needs at least 3 rows, got {rows}")));
    }
    let cnot_row = rows / 2;
    let mut b = Builder::new(vec![BoundaryCondition::plus(), BoundaryCondition::one()]);
    b.identity(0, cnot_row - 1).identity(1, cnot_row - 1);
    b.couple(0, 1, Gate::X);
    b.identity(0, rows - 2 - cnot_row).identity(1, rows - 2 - cnot_row);
    b.push(0, control.op(lambda)).push(1, target.op(lambda));
    Ok(b.finish())
}

/// Qubit `i` CNOT-controls qubit `i + 1` downstream of its own target row.
/// Every coupling is preceded by `rows_between` identity rows on both columns and
/// every qubit ends with `Boost(λ)`. `N = 2, rows_between = 1` is the two-qubit
/// benchmark layout.
pub fn chain_circuit(n: usize, rows_between: usize, lambda: f64) -> Result<CircuitSpec> {
    if n < 2 {
        return Err(GsqcError::InvalidParameter(format!("chain needs at least 2 qubits, got {n}")));
    }
    let mut boundaries = vec![BoundaryCondition::one(); n];
    boundaries[0] = BoundaryCondition::plus();
    let mut b = Builder::new(boundaries);
    b.identity(0, rows_between);
    for i in 0..n - 1 {
        if i > 0 {
            b.identity(i, rows_between);
        }
        b.identity(i + 1, rows_between);
        b.couple(i, i + 1, Gate::X);
    }
    for i in 0..n {
        b.push(i, RowOp::Boost { lambda });
    }
    Ok(b.finish())
}

/// Inverse quantum Fourier transform on `n` wires (no final swaps), with
/// teleportation gadgets spliced between successive couplings on every wire.
/// Logical outputs end in `Boost(λ)`, gadget input and ancilla qubits in
/// `Project(0, λ)`. Inputs start in `|0⟩` except the top wire in `(|0⟩+|1⟩)/√2`.
pub fn qft_circuit(n: usize, lambda: f64) -> Result<CircuitSpec> {
    if n < 2 {
        return Err(GsqcError::InvalidParameter(format!("QFT needs at least 2 qubits, got {n}")));
    }
    let mut boundaries = vec![BoundaryCondition::zero(); n];
    boundaries[n - 1] = BoundaryCondition::plus();
    let mut b = Builder::new(boundaries);
    for j in (0..n).rev() {
        for k in ((j + 1)..n).rev() {
            b.couple(k, j, Gate::RkDag((k - j + 1) as u32));
        }
        b.push(j, RowOp::unitary(Gate::H));
    }
    for q in 0..n {
        b.push(q, RowOp::Boost { lambda });
    }
    let logical = b.finish();
    let template = GadgetTemplate { lambda: Some(lambda), ..GadgetTemplate::default() };
    insert_teleportation(&logical, TeleportPolicy::BetweenCouplings, &template)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::validate_circuit;

    #[test]
    fn generated_circuits_validate() {
        let circuits = vec![
            single_qubit_circuit(6, Some(RowOp::Boost { lambda: 10.0 }), BoundaryCondition::zero()).unwrap(),
            single_qubit_circuit(2, None, BoundaryCondition::zero()).unwrap(),
            two_qubit_circuit(4, 10.0, Terminal::Boost, Terminal::Boost).unwrap(),
            two_qubit_circuit(4, 10.0, Terminal::Project(0), Terminal::Boost).unwrap(),
            two_qubit_circuit(3, 1.0, Terminal::Boost, Terminal::Boost).unwrap(),
            chain_circuit(5, 1, 10.0).unwrap(),
            qft_circuit(2, 3.0).unwrap(),
            qft_circuit(3, 3.0).unwrap(),
            qft_circuit(4, 3.0).unwrap(),
        ];
        for c in circuits {
            let r = validate_circuit(&c);
            assert!(r.is_valid(), "{r:?}");
            assert!(r.warnings.is_empty(), "{r:?}");
        }
    }

    #[test]
    fn two_qubit_benchmark_layout() {
        let c = two_qubit_circuit(4, 10.0, Terminal::Boost, Terminal::Boost).unwrap();
        assert_eq!(c.qubits.len(), 2);
        for q in &c.qubits {
            assert_eq!(q.n_rows(), 4);
            assert_eq!(q.rows[0], RowOp::unitary(Gate::I));
            assert!(q.rows[1].is_coupling());
            assert_eq!(q.rows[2], RowOp::Boost { lambda: 10.0 });
        }
    }

    #[test]
    fn chain_of_two_matches_two_qubit() {
        let a = chain_circuit(2, 1, 7.0).unwrap();
        let b = two_qubit_circuit(4, 7.0, Terminal::Boost, Terminal::Boost).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn chain_layout() {
        let c = chain_circuit(5, 1, 10.0).unwrap();
        let rows: Vec<usize> = c.qubits.iter().map(QubitSpec::n_rows).collect();
        assert_eq!(rows, vec![4, 6, 6, 6, 4]);
        assert_eq!(c.couplings().unwrap().len(), 4);
    }

    #[test]
    fn rejects_small_sizes() {
        assert!(single_qubit_circuit(1, None, BoundaryCondition::zero()).is_err());
        assert!(two_qubit_circuit(2, 1.0, Terminal::Boost, Terminal::Boost).is_err());
        assert!(chain_circuit(1, 1, 1.0).is_err());
        assert!(qft_circuit(1, 1.0).is_err());
    }

    #[test]
    fn qft_coupling_counts() {
        let c2 = qft_circuit(2, 3.0).unwrap();
        assert_eq!(c2.couplings().unwrap().len(), 1);
        assert_eq!(c2.qubits.len(), 2);
        let q1 = c2.qubit("q1").unwrap();
        assert_eq!(q1.rows[0], RowOp::unitary(Gate::H));
        let q0 = c2.qubit("q0").unwrap();
        assert!(matches!(q0.rows[0], RowOp::CoupledTarget { gate: Gate::RkDag(2), .. }));
        assert_eq!(q0.rows[1], RowOp::unitary(Gate::H));

        // 3 logical couplings, plus 2 per gadget; one gadget per wire at N = 3
        let c3 = qft_circuit(3, 3.0).unwrap();
        assert_eq!(c3.qubits.len(), 3 + 2 * 3);
        assert_eq!(c3.couplings().unwrap().len(), 3 + 2 * 3);
    }

    #[test]
    fn qft_qubit_count_grows_quadratically() {
        // logical couplings N(N-1)/2; every wire gets (#couplings on it − 1) gadgets
        for n in 2..7usize {
            let c = qft_circuit(n, 3.0).unwrap();
            let gadgets: usize = (0..n).map(|_| n - 1 - 1).sum();
            assert_eq!(c.qubits.len(), n + 2 * gadgets);
        }
    }
}
