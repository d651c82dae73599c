//! Circuits shared by the solver benchmarks.

use gsqc_core::{chain_circuit, preset, CircuitSpec};

/// Benchmark circuits in increasing Hilbert-space dimension.
pub fn fixtures() -> Vec<(&'static str, CircuitSpec)> {
    vec![
        ("two-qubit", preset("paper-2qubit").expect("preset")),
        ("teleport-1qubit", preset("teleport-1qubit").expect("preset")),
        ("chain-3", chain_circuit(3, 1, 10.0).expect("chain")),
        ("teleport-cnot-control", preset("teleport-cnot-control").expect("preset")),
    ]
}
