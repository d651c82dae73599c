//! JSON circuit files.
//!
//! ```json
//! {
//!   "epsilon": 1.0,
//!   "qubits": [
//!     { "id": "q0",
//!       "boundary": { "a": [-1.0, 0.0, 0.0], "E": 10.0 },
//!       "rows": [
//!         { "op": "unitary", "gate": "I" },
//!         { "op": "coupled_control", "partner": "q1", "partner_row": 2 },
//!         { "op": "boost", "lambda": 10.0 } ] },
//!     ...
//!   ]
//! }
//! ```

use sha2::{Digest, Sha256};

use crate::error::Result;

use super::CircuitSpec;

pub fn from_json(text: &str) -> Result<CircuitSpec> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_json(spec: &CircuitSpec) -> String {
    serde_json::to_string_pretty(spec).expect("circuit serializes")
}

/// SHA-256 of the compact JSON form.
pub fn circuit_hash(spec: &CircuitSpec) -> String {
    let compact = serde_json::to_string(spec).expect("circuit serializes");
    hex::encode(Sha256::digest(compact.as_bytes()))
}
