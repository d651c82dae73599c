//! Diagnostics on eigenvectors, λ sweeps, exponent fits and resource estimates.

mod fit;
mod profile;
mod resource;
mod sweep;

pub use fit::{fit_exponent, fit_power_law, PowerFit, Window};
pub use profile::{final_row_success_probability, row_profile, upstream_to_final_ratio, upstream_weight, RowProfile};
pub use resource::{ResourceEstimate, MAX_ROWS_PER_QUBIT};
pub use sweep::{lambda_sweep, SweepPoint, SweepTable};
