use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::CircuitSpec;
use crate::eigen::{spectral_gap, EigenOptions, Method};
use crate::error::{GsqcError, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SweepPoint {
    pub lambda: f64,
    pub gap: Option<f64>,
    pub e2_gap: Option<f64>,
    /// Worst eigen-residual of the point.
    pub residual: Option<f64>,
    pub dimension: Option<usize>,
    pub method: Option<Method>,
    pub error: Option<String>,
    /// Wall time; kept out of the serialized report so reruns compare equal.
    #[serde(skip)]
    pub seconds: f64,
}

impl SweepPoint {
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.gap.is_some_and(|g| g > 0.0)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SweepTable {
    pub family: String,
    pub points: Vec<SweepPoint>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), |x| format!("{x:.10e}"))
}

impl SweepTable {
    /// Comma-separated table, one row per λ.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda,gap,e2_minus_e0,residual,dimension,method,status\n");
        for p in &self.points {
            let _ = writeln!(
                s,
                "{:.10e},{},{},{},{},{},{}",
                p.lambda,
                fmt_opt(p.gap),
                fmt_opt(p.e2_gap),
                fmt_opt(p.residual),
                p.dimension.map_or_else(String::new, |d| d.to_string()),
                p.method.map_or_else(String::new, |m| m.to_string()),
                p.error.as_deref().map_or_else(|| "ok".to_string(), |e| format!("error: {}", e.replace(',', ";"))),
            );
        }
        s
    }

    /// Wall-time sidecar: `lambda,seconds`.
    pub fn timing_csv(&self) -> String {
        let mut s = String::from("lambda,seconds\n");
        for p in &self.points {
            let _ = writeln!(s, "{:.10e},{:.6}", p.lambda, p.seconds);
        }
        s
    }

    pub fn gaps(&self) -> Vec<(f64, f64)> {
        self.points.iter().filter(|p| p.ok()).map(|p| (p.lambda, p.gap.unwrap())).collect()
    }

    pub fn e2_gaps(&self) -> Vec<(f64, f64)> {
        self.points.iter().filter(|p| p.error.is_none()).filter_map(|p| p.e2_gap.map(|g| (p.lambda, g))).collect()
    }
}

fn check_lambdas(lambdas: &[f64]) -> Result<()> {
    if lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(GsqcError::InvalidParameter("λ values must be positive and finite".into()));
    }
    if lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GsqcError::InvalidParameter("λ list must be strictly increasing".into()));
    }
    Ok(())
}

/// Solves the gap of `family(λ)` at each λ. Points run in parallel; failures are
/// kept in the table with their error message.
pub fn lambda_sweep<F>(family_id: &str, family: F, lambdas: &[f64], opts: &EigenOptions) -> Result<SweepTable>
where
    F: Fn(f64) -> Result<CircuitSpec> + Sync,
{
    check_lambdas(lambdas)?;
    let points = lambdas
        .par_iter()
        .map(|&lambda| {
            let start = Instant::now();
            let outcome = family(lambda).and_then(|c| spectral_gap(&c, opts));
            let seconds = start.elapsed().as_secs_f64();
            match outcome {
                Ok(g) => SweepPoint {
                    lambda,
                    gap: Some(g.gap),
                    e2_gap: g.e2.map(|e2| e2 - g.e0),
                    residual: Some(g.residuals.iter().copied().fold(0.0, f64::max)),
                    dimension: Some(g.dimension),
                    method: Some(g.method),
                    error: None,
                    seconds,
                },
                Err(e) => SweepPoint {
                    lambda,
                    gap: None,
                    e2_gap: None,
                    residual: None,
                    dimension: None,
                    method: None,
                    error: Some(e.to_string()),
                    seconds,
                },
            }
        })
        .collect();
    Ok(SweepTable { family: family_id.to_string(), points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{single_qubit_circuit, BoundaryCondition, RowOp};

    #[test]
    fn failures_are_kept_and_order_preserved() {
        let family = |l: f64| {
            if l > 5.0 {
                Err(GsqcError::InvalidParameter("boom".into()))
            } else {
                single_qubit_circuit(4, Some(RowOp::Boost { lambda: l }), BoundaryCondition::zero())
            }
        };
        let t = lambda_sweep("test", family, &[1.0, 2.0, 10.0], &EigenOptions::default()).unwrap();
        assert_eq!(t.points.len(), 3);
        assert!(t.points[0].ok() && t.points[1].ok() && !t.points[2].ok());
        assert!(t.to_csv().lines().nth(3).unwrap().contains("error: "));
        assert_eq!(t.gaps().len(), 2);
    }

    #[test]
    fn rejects_unsorted_lambdas() {
        let f = |_| single_qubit_circuit(3, None, BoundaryCondition::zero());
        assert!(lambda_sweep("x", f, &[2.0, 1.0], &EigenOptions::default()).is_err());
        assert!(lambda_sweep("x", f, &[-1.0], &EigenOptions::default()).is_err());
    }
}
