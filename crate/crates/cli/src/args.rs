use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsqc_core::{EigenOptions, TeleportPolicy};

#[derive(Parser, Debug)]
#[command(name = "gsqc", version, about = "Spectral gaps and ground states of double-dot qubit circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for λ sweeps and sparse products.
    #[arg(long, global = true, env = "GSQC_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a circuit file against the schema and structural rules.
    Validate(ValidateArgs),
    /// Ground energy, gap and second excitation.
    Gap(SolveArgs),
    /// Analytic ground state, row profiles and final-row probability.
    Groundstate(SolveArgs),
    /// Gap over a λ list with an exponent fit.
    Sweep(SweepArgs),
    /// Closed-form resource scaling.
    Estimate(EstimateArgs),
    /// Recompute the reference gap tables and compare.
    PaperRepro(ReproArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = false, multiple = false)]
pub struct Input {
    /// Circuit JSON file.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Built-in circuit name (see `gsqc validate --list-presets`).
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// Circuit JSON file (same as --circuit).
    pub path: Option<PathBuf>,
    #[command(flatten)]
    pub input: Input,
    #[arg(long)]
    pub list_presets: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Solver {
    /// Eigenvalues to compute, ground state included.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Absolute residual tolerance (default min(1e-11·√D, 1e-9)).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 2048)]
    pub dense_threshold: usize,
    #[arg(long, default_value_t = 20_240_917)]
    pub seed: u64,
    #[arg(long, default_value_t = 48)]
    pub basis_size: usize,
    #[arg(long, default_value_t = 400_000)]
    pub max_matvecs: usize,
    /// Run the Krylov solver on (H + σ)⁻¹ with σ = tol.
    #[arg(long)]
    pub shift_invert: bool,
}

impl Solver {
    pub fn options(&self) -> EigenOptions {
        EigenOptions {
            k: self.k,
            tol: self.tol,
            max_matvecs: self.max_matvecs,
            basis_size: self.basis_size,
            seed: self.seed,
            dense_threshold: self.dense_threshold,
            shift_invert: self.shift_invert,
            ..EigenOptions::default()
        }
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: Input,
    /// Comma-separated λ values replacing every Boost/Project amplification;
    /// `sqrt(x)` is accepted.
    #[arg(long, value_parser = parse_lambda_list)]
    pub lambda: Option<LambdaList>,
    #[command(flatten)]
    pub solver: Solver,
    /// Directory for machine-readable reports.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    SingleBoost,
    SingleProject,
    TwoQubit,
    TwoQubitMixed,
    Chain,
    Qft,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum, conflicts_with_all = ["circuit", "preset"])]
    pub family: Option<Family>,
    #[command(flatten)]
    pub input: Input,
    /// Qubits for `chain` and `qft`; rows for the single-qubit families.
    #[arg(long)]
    pub n: Option<usize>,
    /// Identity rows before each coupling in `chain`.
    #[arg(long, default_value_t = 1)]
    pub rows_between: usize,
    /// Splice teleportation gadgets into the family circuit.
    #[arg(long, num_args = 0..=1, default_missing_value = "between-couplings", value_parser = parse_policy)]
    pub teleport: Option<TeleportPolicy>,
    #[arg(long, value_parser = parse_lambda_list)]
    pub lambda: Option<LambdaList>,
    /// Lower end of the fit window (default √10 · longest qubit / 2).
    #[arg(long)]
    pub fit_min: Option<f64>,
    #[arg(long)]
    pub fit_max: Option<f64>,
    #[command(flatten)]
    pub solver: Solver,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Problem size in bits.
    #[arg(long)]
    pub n: u64,
    /// Control operations grow as N^k.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Rows per qubit.
    #[arg(long, default_value_t = 8.0)]
    pub c: f64,
    /// Tuning constant (default C).
    #[arg(long)]
    pub d: Option<f64>,
    /// Qubit-count factor.
    #[arg(long, default_value_t = 1.0)]
    pub f: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReproArgs {
    /// Relative tolerance per row.
    #[arg(long, default_value_t = 0.02)]
    pub tolerance: f64,
    /// Skip rows whose Hilbert space exceeds the dense threshold.
    #[arg(long)]
    pub skip_slow: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaList(pub Vec<f64>);

fn parse_lambda(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        Some(inner) => inner.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"))?.sqrt(),
        None => s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"))?,
    };
    if !(v.is_finite() && v > 0.0) {
        return Err(format!("λ must be positive, got `{s}`"));
    }
    Ok(v)
}

pub fn parse_lambda_list(s: &str) -> Result<LambdaList, String> {
    let values = s.split(',').filter(|p| !p.trim().is_empty()).map(parse_lambda).collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("empty λ list".into());
    }
    Ok(LambdaList(values))
}

fn parse_policy(s: &str) -> Result<TeleportPolicy, String> {
    s.parse().map_err(|e: gsqc_core::GsqcError| e.to_string())
}
