use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GsqcError, Result};

/// Largest number of rows per qubit the estimate accepts.
pub const MAX_ROWS_PER_QUBIT: f64 = 8.0;

/// Closed-form cost of an `N`-bit computation with `N^k` control operations,
/// one teleported qubit block per operation.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResourceEstimate {
    pub n: u64,
    pub k: u32,
    pub d: f64,
    pub f: f64,
    pub c: f64,
    pub control_ops: f64,
    pub qubits: f64,
    /// `√D · N^{k/2}`, keeping the final-row probability fixed as `N` grows.
    pub lambda: f64,
    /// `1/λ⁸ = 1/(D⁴ N^{4k})`, in units of ε.
    pub gap_scale: f64,
    pub gap_exponent: u32,
    /// Large-`N` limit `e^{−FC/D}`.
    pub success_probability: f64,
    /// `(1 − C/λ²)^{F N^k}` at this `N`.
    pub success_probability_finite: f64,
    /// `Δ⁻²`, in units of ħ/ε.
    pub time_scale: f64,
    pub time_exponent: u32,
}

fn sup(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    if n == 1 {
        return String::new();
    }
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

impl ResourceEstimate {
    pub fn new(n: u64, k: u32, d: f64, f: f64, c: f64) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(GsqcError::InvalidParameter("N and k must be positive".into()));
        }
        for (name, v) in [("D", d), ("F", f), ("C", c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(GsqcError::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if c > MAX_ROWS_PER_QUBIT {
            return Err(GsqcError::InvalidParameter(format!("C must be at most {MAX_ROWS_PER_QUBIT}, got {c}")));
        }
        let nf = n as f64;
        let control_ops = nf.powi(k as i32);
        let qubits = f * control_ops;
        let lambda = d.sqrt() * nf.powf(k as f64 / 2.0);
        let gap_scale = 1.0 / (d.powi(4) * nf.powi(4 * k as i32));
        let per_qubit = 1.0 - c / (lambda * lambda);
        let success_probability_finite = if per_qubit > 0.0 { (qubits * per_qubit.ln()).exp() } else { 0.0 };
        Ok(Self {
            n,
            k,
            d,
            f,
            c,
            control_ops,
            qubits,
            lambda,
            gap_scale,
            gap_exponent: 4 * k,
            success_probability: (-f * c / d).exp(),
            success_probability_finite,
            time_scale: 1.0 / (gap_scale * gap_scale),
            time_exponent: 8 * k,
        })
    }

    /// Defaults `F = 1`, `D = C`.
    pub fn with_defaults(n: u64, k: u32, c: f64) -> Result<Self> {
        Self::new(n, k, c, 1.0, c)
    }

    /// Symbolic scaling laws, one per line.
    pub fn laws(&self) -> Vec<String> {
        let k = self.k;
        let lambda =
            if k & 1 == 0 { format!("λ = √D·N{}", sup(k / 2)) } else { format!("λ = √(D·N{})", sup(k)) };
        vec![
            format!("control operations = N{}", sup(k)),
            format!("qubits ≈ F·N{}", sup(k)),
            lambda,
            format!("Δ ∝ ε/(D⁴N{})", sup(4 * k)),
            "P ≈ e^(−FC/D)".to_string(),
            format!("T ∝ Δ⁻² ∝ D⁸N{}", sup(8 * k)),
        ]
    }
}

impl fmt::Display for ResourceEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "N = {}, k = {}, D = {}, F = {}, C = {}", self.n, self.k, self.d, self.f, self.c)?;
        for law in self.laws() {
            writeln!(f, "  {law}")?;
        }
        writeln!(f, "control operations  {:.6e}", self.control_ops)?;
        writeln!(f, "qubits              {:.6e}", self.qubits)?;
        writeln!(f, "lambda              {:.6e}", self.lambda)?;
        writeln!(f, "gap / epsilon       {:.6e}", self.gap_scale)?;
        writeln!(f, "gap exponent        {}", self.gap_exponent)?;
        writeln!(f, "P (large N)         {:.6}", self.success_probability)?;
        writeln!(f, "P (this N)          {:.6}", self.success_probability_finite)?;
        writeln!(f, "time / (hbar/eps)   {:.6e}", self.time_scale)?;
        write!(f, "time exponent       {}", self.time_exponent)
    }
}
