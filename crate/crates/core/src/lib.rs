//! Ground-state quantum computation on coupled double-dot qubits: circuit
//! description, many-body basis, Hamiltonian assembly, the analytic ground
//! state, low-lying spectrum and scaling analysis.

pub mod analysis;
pub mod basis;
pub mod circuit;
pub mod eigen;
pub mod error;
pub mod groundstate;
pub mod hamiltonian;
pub mod presets;

pub use analysis::{
    final_row_success_probability, fit_exponent, lambda_sweep, row_profile, upstream_weight, ResourceEstimate,
    SweepTable, Window,
};
pub use basis::{build_basis, build_basis_with, BasisMap, BasisOptions, Site, SiteIndex};
pub use circuit::{
    chain_circuit, circuit_hash, from_json, gate, insert_teleportation, qft_circuit, single_qubit_circuit, to_json,
    two_qubit_circuit, validate_circuit, BoundaryCondition, CircuitSpec, Gate, GateMatrix, QubitSpec, RowOp,
    TeleportPolicy, Terminal, ValidationReport,
};
pub use eigen::{dense_lowest, gap_of, krylov_lowest, spectral_gap, EigenOptions, EigenPair, GapResult, Method};
pub use error::{GsqcError, Result};
pub use groundstate::{
    construct_ground_state, product_state, residual_energy, residual_norm, term_residuals, StateVector,
};
pub use hamiltonian::{assemble, SparseHermitian};
pub use presets::{preset, preset_names};
