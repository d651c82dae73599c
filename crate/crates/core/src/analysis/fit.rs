use serde::{Deserialize, Serialize};

use crate::error::{GsqcError, Result};

use super::sweep::SweepTable;

/// Least-squares power law `y = A·λ^slope`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct PowerFit {
    pub slope: f64,
    pub stderr: f64,
    /// `ln A`.
    pub intercept: f64,
    pub points: usize,
}

impl PowerFit {
    pub fn predict(&self, lambda: f64) -> f64 {
        (self.intercept + self.slope * lambda.ln()).exp()
    }
}

/// Closed λ interval; bounds may be infinite.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub const ALL: Window = Window { lo: 0.0, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// `λ ≥ √10 · max_rows / 2`: the regime where λ dominates qubit length.
    pub fn asymptotic(max_rows: usize) -> Self {
        Self { lo: 10f64.sqrt() * max_rows as f64 / 2.0, hi: f64::INFINITY }
    }

    pub fn contains(&self, x: f64) -> bool {
        let slack = 1e-9;
        x >= self.lo * (1.0 - slack) && x <= self.hi * (1.0 + slack)
    }
}

/// Fits `ln y` against `ln x` for the points inside `window` with `y > 0`.
pub fn fit_power_law(points: &[(f64, f64)], window: Window) -> Result<PowerFit> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| window.contains(*x) && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len();
    if n < 3 {
        return Err(GsqcError::InsufficientPoints { needed: 3, have: n });
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(GsqcError::InvalidParameter("fit needs at least two distinct λ".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = (sse / (nf - 2.0) / sxx).sqrt();
    Ok(PowerFit { slope, stderr, intercept, points: n })
}

/// Exponent of `Δ(λ)` from the successful points of a sweep.
pub fn fit_exponent(table: &SweepTable, window: Window) -> Result<PowerFit> {
    fit_power_law(&table.gaps(), window)
}
