//! Single-qubit gates used on unitary rows and as the payload of controlled couplings.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{GsqcError, Result};

/// A 2×2 complex matrix acting on the two dots of a row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateMatrix(pub [[C64; 2]; 2]);

impl GateMatrix {
    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self([[one, zero], [zero, one]])
    }

    pub fn diag(a: C64, b: C64) -> Self {
        let zero = C64::new(0.0, 0.0);
        Self([[a, zero], [zero, b]])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self(out)
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Largest entrywise deviation of `G†G` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.dagger().mul(self);
        let id = Self::identity();
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((p.0[i][j] - id.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }
}

/// Named library gates plus arbitrary matrices.
///
/// The named form is kept so that circuit files round-trip exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    I,
    X,
    H,
    /// Phase `exp(+2πi/2^k)` on `|1⟩`.
    Rk(u32),
    /// Phase `exp(-2πi/2^k)` on `|1⟩`.
    RkDag(u32),
    Matrix(GateMatrix),
}

impl Gate {
    pub fn matrix(&self) -> GateMatrix {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        match self {
            Gate::I => GateMatrix::identity(),
            Gate::X => GateMatrix([[zero, one], [one, zero]]),
            Gate::H => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                GateMatrix([[h, h], [h, -h]])
            }
            Gate::Rk(k) => GateMatrix::diag(one, phase(2.0 * PI / 2f64.powi(*k as i32))),
            Gate::RkDag(k) => GateMatrix::diag(one, phase(-2.0 * PI / 2f64.powi(*k as i32))),
            Gate::Matrix(m) => *m,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Gate::I => "I".into(),
            Gate::X => "X".into(),
            Gate::H => "H".into(),
            Gate::Rk(k) => format!("R{k}"),
            Gate::RkDag(k) => format!("R{k}_dag"),
            Gate::Matrix(_) => "U".into(),
        }
    }
}

fn phase(theta: f64) -> C64 {
    let (s, c) = theta.sin_cos();
    // snap exact values so that e.g. R1_dag is exactly diag(1, -1)
    let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    C64::new(snap(c), snap(s))
}

/// Looks up a library gate by name. `k` is required for `Rk` / `Rk_dag`.
pub fn gate(name: &str, k: Option<u32>) -> Result<GateMatrix> {
    Ok(named_gate(name, k)?.matrix())
}

pub(crate) fn named_gate(name: &str, k: Option<u32>) -> Result<Gate> {
    let need_k = || match k {
        Some(k) if k >= 1 => Ok(k),
        _ => Err(GsqcError::MissingPhaseIndex(name.to_string())),
    };
    match name {
        "I" => Ok(Gate::I),
        "X" | "N" | "NOT" => Ok(Gate::X),
        "H" => Ok(Gate::H),
        "Rk" => Ok(Gate::Rk(need_k()?)),
        "Rk_dag" => Ok(Gate::RkDag(need_k()?)),
        other => Err(GsqcError::UnknownGate(other.to_string())),
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

// File representation: "X", {"name": "Rk_dag", "k": 2}, or {"matrix": [[[re, im], ...], ...]}.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GateRepr {
    Name(String),
    Phase { name: String, k: u32 },
    Matrix { matrix: [[[f64; 2]; 2]; 2] },
}

impl Serialize for Gate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Gate::I | Gate::X | Gate::H => GateRepr::Name(self.name()),
            Gate::Rk(k) => GateRepr::Phase { name: "Rk".into(), k: *k },
            Gate::RkDag(k) => GateRepr::Phase { name: "Rk_dag".into(), k: *k },
            Gate::Matrix(m) => {
                let e = |i: usize, j: usize| [m.0[i][j].re, m.0[i][j].im];
                GateRepr::Matrix { matrix: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
            }
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Gate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        match GateRepr::deserialize(d)? {
            GateRepr::Name(name) => named_gate(&name, None).map_err(D::Error::custom),
            GateRepr::Phase { name, k } => named_gate(&name, Some(k)).map_err(D::Error::custom),
            GateRepr::Matrix { matrix } => {
                let c = |p: [f64; 2]| C64::new(p[0], p[1]);
                Ok(Gate::Matrix(GateMatrix([[c(matrix[0][0]), c(matrix[0][1])], [c(matrix[1][0]), c(matrix[1][1])]])))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn not_gate() {
        let x = gate("X", None).unwrap();
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        assert_eq!(x, GateMatrix([[zero, one], [one, zero]]));
    }

    #[test]
    fn r1_dag_is_z() {
        let r = gate("Rk_dag", Some(1)).unwrap();
        assert_eq!(r, GateMatrix::diag(C64::new(1.0, 0.0), C64::new(-1.0, 0.0)));
    }

    #[test]
    fn hadamard_is_involution() {
        let h = gate("H", None).unwrap();
        assert!(h.mul(&h).max_abs_diff(&GateMatrix::identity()) < 1e-15);
    }

    #[test]
    fn library_gates_are_unitary() {
        let mut gates = vec![Gate::I, Gate::X, Gate::H];
        for k in 1..12 {
            gates.push(Gate::Rk(k));
            gates.push(Gate::RkDag(k));
        }
        for g in gates {
            assert!(g.matrix().unitarity_defect() <= 1e-12, "{g}");
        }
    }

    #[test]
    fn rk_dag_phase() {
        let r = gate("Rk_dag", Some(3)).unwrap();
        let expected = C64::from_polar(1.0, -2.0 * PI / 8.0);
        assert!((r.get(1, 1) - expected).norm() < 1e-15);
        assert!(
            gate("Rk_dag", Some(3)).unwrap().mul(&gate("Rk", Some(3)).unwrap()).max_abs_diff(&GateMatrix::identity())
                < 1e-15
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(gate("Q", None), Err(GsqcError::UnknownGate(_))));
        assert!(matches!(gate("Rk_dag", None), Err(GsqcError::MissingPhaseIndex(_))));
        assert!(matches!(gate("Rk", Some(0)), Err(GsqcError::MissingPhaseIndex(_))));
    }

    #[test]
    fn serde_forms() {
        let g: Gate = serde_json::from_str("\"H\"").unwrap();
        assert_eq!(g, Gate::H);
        let g: Gate = serde_json::from_str(r#"{"name":"Rk_dag","k":2}"#).unwrap();
        assert_eq!(g, Gate::RkDag(2));
        let m = Gate::Matrix(Gate::H.matrix());
        let back: Gate = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
