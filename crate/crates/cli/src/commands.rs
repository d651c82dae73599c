use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use gsqc_core::analysis::{fit_power_law, upstream_weight, PowerFit};
use gsqc_core::circuit::GadgetTemplate;
use gsqc_core::presets::preset_source;
use gsqc_core::*;

use crate::args::{EstimateArgs, Family, Input, ReproArgs, SolveArgs, SweepArgs, ValidateArgs};
use crate::report::{sci, write_json, write_text};

fn code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Raw circuit text and a label for messages.
fn source(input: &Input, path: Option<&Path>) -> Result<(String, String)> {
    let file = match (path, input.circuit.as_deref()) {
        (Some(_), Some(_)) => {
            bail!("give the circuit either positionally or with --circuit, not both")
        }
        (p, c) => p.or(c),
    };
    match (file, input.preset.as_deref()) {
        (Some(_), Some(_)) => bail!("--preset conflicts with a circuit file"),
        (Some(p), None) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok((p.display().to_string(), text))
        }
        (None, Some(name)) => Ok((format!("preset {name}"), preset_source(name)?.to_string())),
        (None, None) => bail!("no circuit given (use --circuit FILE or --preset NAME)"),
    }
}

fn load(input: &Input) -> Result<CircuitSpec> {
    let (label, text) = source(input, None)?;
    let spec = from_json(&text).with_context(|| format!("parsing {label}"))?;
    let report = validate_circuit(&spec);
    if !report.is_valid() {
        let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        bail!("{label} is not a valid circuit:\n  {}", lines.join("\n  "));
    }
    Ok(spec)
}

pub fn validate(a: &ValidateArgs) -> Result<ExitCode> {
    if a.list_presets {
        for name in preset_names() {
            println!("{name}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let (label, text) = source(&a.input, a.path.as_deref())?;
    let spec = match from_json(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{label}: {e}");
            return Ok(ExitCode::from(2));
        }
    };
    let report = validate_circuit(&spec);
    for v in &report.violations {
        println!("violation: {v}");
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    if !report.is_valid() {
        println!("{label}: invalid ({} violations)", report.violations.len());
        return Ok(code(false));
    }
    let dim = build_basis(&spec).map(|b| b.dimension().to_string()).unwrap_or_else(|e| format!("unavailable ({e})"));
    println!(
        "{label}: valid, {} qubits, {} rows, dimension {dim}, hash {}",
        spec.qubits.len(),
        spec.total_rows(),
        circuit_hash(&spec)
    );
    Ok(code(true))
}

fn lambda_points(spec: &CircuitSpec, list: Option<&crate::args::LambdaList>) -> Vec<(Option<f64>, CircuitSpec)> {
    match list {
        None => vec![(None, spec.clone())],
        Some(l) => l.0.iter().map(|&x| (Some(x), spec.with_lambda(x))).collect(),
    }
}

fn lambda_label(l: Option<f64>) -> String {
    l.map_or_else(|| "as given".into(), |x| format!("{x}"))
}

#[derive(Serialize)]
struct GapReport {
    lambda: Option<f64>,
    circuit_hash: String,
    result: Option<GapResult>,
    error: Option<String>,
}

pub fn gap(a: &SolveArgs) -> Result<ExitCode> {
    let spec = load(&a.input)?;
    let opts = a.solver.options();
    let mut reports = Vec::new();
    let mut ok = true;
    for (lambda, c) in lambda_points(&spec, a.lambda.as_ref()) {
        let hash = circuit_hash(&c);
        println!("λ = {}", lambda_label(lambda));
        match spectral_gap(&c, &opts) {
            Ok(g) => {
                let worst = g.residuals.iter().copied().fold(0.0, f64::max);
                println!(
                    "  dimension {}  method {}  deflated {}  tol {}",
                    g.dimension,
                    g.method,
                    g.deflated,
                    sci(g.tol)
                );
                println!("  E0      {}", sci(g.e0));
                println!("  gap     {}  (E1 multiplicity {})", sci(g.gap), g.e1_multiplicity);
                if let Some(e2) = g.e2 {
                    println!("  E2 - E0 {}", sci(e2 - g.e0));
                }
                println!("  worst residual {}  matvecs {}", sci(worst), g.matvecs);
                reports.push(GapReport { lambda, circuit_hash: hash, result: Some(g), error: None });
            }
            Err(e) => {
                println!("  failed: {e}");
                ok = false;
                reports.push(GapReport { lambda, circuit_hash: hash, result: None, error: Some(e.to_string()) });
            }
        }
    }
    if let Some(dir) = &a.out {
        write_json(dir, "gap.json", &reports)?;
    }
    Ok(code(ok))
}

#[derive(Serialize)]
struct GroundReport {
    lambda: Option<f64>,
    circuit_hash: String,
    dimension: usize,
    log2_scale: i32,
    residual_norm: f64,
    energy: f64,
    final_row_probability: f64,
    term_residuals: Vec<(String, f64)>,
    profiles: Vec<RowProfileReport>,
}

#[derive(Serialize)]
struct RowProfileReport {
    #[serde(flatten)]
    profile: analysis::RowProfile,
    /// Upstream weight for each cut row `1..rows`.
    upstream: Vec<f64>,
}

pub fn groundstate(a: &SolveArgs) -> Result<ExitCode> {
    let spec = load(&a.input)?;
    let points = lambda_points(&spec, a.lambda.as_ref());
    let multi = points.len() > 1;
    for (i, (lambda, c)) in points.into_iter().enumerate() {
        let basis = build_basis(&c)?;
        let h = assemble(&c, &basis)?;
        let raw = construct_ground_state(&c, &basis)?;
        let psi = raw.normalized()?;
        let residual = residual_norm(&h, &psi)?;
        let energy = residual_energy(&h, &psi)?;
        let success = final_row_success_probability(&psi, &basis)?;
        let terms = term_residuals(&c, &basis, &psi)?;
        println!("λ = {}", lambda_label(lambda));
        println!("  dimension {}  ‖Hψ₀‖ {}  ⟨H⟩ {}", basis.dimension(), sci(residual), sci(energy));
        println!("  final-row probability {:.6}", success);
        let mut profiles = Vec::new();
        for id in basis.qubit_ids() {
            let p = row_profile(&psi, &basis, id)?;
            let upstream = (1..p.probability.len())
                .map(|cut| upstream_weight(&psi, &basis, id, cut))
                .collect::<gsqc_core::Result<Vec<_>>>()?;
            let cells: Vec<String> = p.probability.iter().map(|x| format!("{x:.4}")).collect();
            println!("  {id:<12} {}", cells.join(" "));
            profiles.push(RowProfileReport { profile: p, upstream });
        }
        if let Some(dir) = &a.out {
            let suffix = if multi { format!("-{i}") } else { String::new() };
            let mut dump = Vec::new();
            raw.write_dump(&basis, 0.0, &mut dump)?;
            write_text(dir, &format!("groundstate{suffix}.dump"), &String::from_utf8(dump)?)?;
            let report = GroundReport {
                lambda,
                circuit_hash: circuit_hash(&c),
                dimension: basis.dimension(),
                log2_scale: raw.log2_scale(),
                residual_norm: residual,
                energy,
                final_row_probability: success,
                term_residuals: terms,
                profiles,
            };
            write_json(dir, &format!("profile{suffix}.json"), &report)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

type Generator = Box<dyn Fn(f64) -> gsqc_core::Result<CircuitSpec> + Sync>;

const DEFAULT_SWEEP: [f64; 5] = [1.0, 3.162_277_660_168_379_5, 10.0, 31.622_776_601_683_793, 100.0];

fn family_builder(a: &SweepArgs) -> Result<(String, Generator)> {
    if let Some(f) = a.family {
        let one = || preset("paper-1qubit-boost").map(|c| c.qubits[0].boundary.clone());
        let rows = a.n.unwrap_or(6);
        let qubits = a.n.unwrap_or(match f {
            Family::Qft => 2,
            _ => 3,
        });
        let rows_between = a.rows_between;
        let (id, build): (String, Generator) = match f {
            Family::SingleBoost => {
                let b = one()?;
                (
                    format!("single-boost-r{rows}"),
                    Box::new(move |l| single_qubit_circuit(rows, Some(RowOp::Boost { lambda: l }), b.clone())),
                )
            }
            Family::SingleProject => {
                let b = one()?;
                (
                    format!("single-project-r{rows}"),
                    Box::new(move |l| {
                        single_qubit_circuit(rows, Some(RowOp::Project { dot: 0, lambda: l }), b.clone())
                    }),
                )
            }
            Family::TwoQubit => {
                let r = a.n.unwrap_or(4);
                (
                    format!("two-qubit-r{r}"),
                    Box::new(move |l| two_qubit_circuit(r, l, Terminal::Boost, Terminal::Boost)),
                )
            }
            Family::TwoQubitMixed => {
                let r = a.n.unwrap_or(4);
                (
                    format!("two-qubit-mixed-r{r}"),
                    Box::new(move |l| two_qubit_circuit(r, l, Terminal::Boost, Terminal::Project(0))),
                )
            }
            Family::Chain => {
                (format!("chain-n{qubits}-b{rows_between}"), Box::new(move |l| chain_circuit(qubits, rows_between, l)))
            }
            Family::Qft => {
                if a.teleport.is_some() {
                    bail!("the qft family already carries teleportation gadgets");
                }
                (format!("qft-n{qubits}"), Box::new(move |l| qft_circuit(qubits, l)))
            }
        };
        return Ok(with_teleport(id, build, a.teleport));
    }
    let spec = load(&a.input)?;
    let id = match (&a.input.preset, &a.input.circuit) {
        (Some(p), _) => p.clone(),
        (_, Some(path)) => path.file_stem().map_or_else(|| "circuit".into(), |s| s.to_string_lossy().into_owned()),
        _ => bail!("sweep needs --family, --circuit or --preset"),
    };
    Ok(with_teleport(id, Box::new(move |l| Ok(spec.with_lambda(l))), a.teleport))
}

fn with_teleport(id: String, build: Generator, policy: Option<TeleportPolicy>) -> (String, Generator) {
    match policy {
        None => (id, build),
        Some(p) => {
            let name = serde_json::to_value(p).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            (
                format!("{id}+teleport-{name}"),
                Box::new(move |l| insert_teleportation(&build(l)?, p, &GadgetTemplate::default())),
            )
        }
    }
}

#[derive(Serialize)]
struct SweepReport<'a> {
    table: &'a SweepTable,
    window: Window,
    fit: Option<PowerFit>,
    e2_fit: Option<PowerFit>,
    fit_error: Option<String>,
}

fn plot_data(table: &SweepTable, fit: Option<&PowerFit>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# family {}", table.family);
    match fit {
        Some(f) => {
            let _ = writeln!(
                s,
                "# fit gap = exp({:.10e}) * lambda^({:.10e}) stderr {:.3e} points {}",
                f.intercept, f.slope, f.stderr, f.points
            );
        }
        None => s.push_str("# fit unavailable\n"),
    }
    s.push_str("# lambda gap fit\n");
    for (l, g) in table.gaps() {
        let predicted = fit.map_or(f64::NAN, |f| f.predict(l));
        let _ = writeln!(s, "{l:.10e} {g:.10e} {predicted:.10e}");
    }
    s
}

pub fn sweep(a: &SweepArgs) -> Result<ExitCode> {
    let (id, build) = family_builder(a)?;
    let lambdas = a.lambda.as_ref().map_or_else(|| DEFAULT_SWEEP.to_vec(), |l| l.0.clone());
    let first = build(lambdas[0])?;
    let window = Window::new(
        a.fit_min.unwrap_or_else(|| Window::asymptotic(first.max_qubit_rows()).lo),
        a.fit_max.unwrap_or(f64::INFINITY),
    );
    let opts = a.solver.options();
    let table = lambda_sweep(&id, &build, &lambdas, &opts)?;

    println!("{id}");
    println!("{:>14} {:>12} {:>12} {:>10} {:>9} {:>20}", "lambda", "gap", "E2-E0", "residual", "dim", "method");
    for p in &table.points {
        let f = |v: Option<f64>| v.map_or_else(|| "-".to_string(), sci);
        match &p.error {
            None => println!(
                "{:>14.6} {:>12} {:>12} {:>10} {:>9} {:>20}",
                p.lambda,
                f(p.gap),
                f(p.e2_gap),
                p.residual.map_or_else(|| "-".into(), |r| format!("{r:.1e}")),
                p.dimension.map_or_else(|| "-".into(), |d| d.to_string()),
                p.method.map_or_else(|| "-".into(), |m| m.to_string()),
            ),
            Some(e) => println!("{:>14.6} failed: {e}", p.lambda),
        }
    }
    let (fit, fit_error) = match fit_exponent(&table, window) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let e2_fit = fit_power_law(&table.e2_gaps(), window).ok();
    match (&fit, &fit_error) {
        (Some(f), _) => println!(
            "fit over λ ∈ [{:.4}, {}]: slope {:.4} ± {:.4} ({} points)",
            window.lo,
            if window.hi.is_finite() { format!("{:.4}", window.hi) } else { "∞".into() },
            f.slope,
            f.stderr,
            f.points
        ),
        (None, Some(e)) => println!("no fit: {e}"),
        _ => {}
    }
    if let Some(f) = &e2_fit {
        println!("E2 - E0 slope {:.4} ± {:.4}", f.slope, f.stderr);
    }

    if let Some(dir) = &a.out {
        write_text(dir, "sweep.csv", &table.to_csv())?;
        write_text(dir, "sweep.timing.csv", &table.timing_csv())?;
        write_text(dir, "sweep.plot.dat", &plot_data(&table, fit.as_ref()))?;
        write_json(dir, "sweep.json", &SweepReport { table: &table, window, fit, e2_fit, fit_error })?;
    }
    Ok(code(table.points.iter().all(|p| p.error.is_none())))
}

pub fn estimate(a: &EstimateArgs) -> Result<ExitCode> {
    let e = ResourceEstimate::new(a.n, a.k, a.d.unwrap_or(a.c), a.f, a.c)?;
    println!("{e}");
    if let Some(dir) = &a.out {
        write_json(dir, "estimate.json", &e)?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Reference gaps: (preset, λ, quoted value).
const REFERENCE: [(&str, f64, f64); 10] = [
    ("paper-1qubit-boost", 1.0, 0.0782),
    ("paper-1qubit-boost", 3.162_277_660_168_379_5, 0.0174),
    ("paper-1qubit-boost", 10.0, 1.94e-3),
    ("paper-1qubit-boost", 31.622_776_601_683_793, 1.96e-4),
    ("paper-1qubit-boost", 100.0, 1.96e-5),
    ("paper-2qubit", 1.0, 0.0574),
    ("paper-2qubit", 3.162_277_660_168_379_5, 2.43e-3),
    ("paper-2qubit", 10.0, 3.05e-5),
    ("paper-2qubit", 31.622_776_601_683_793, 3.12e-7),
    ("paper-2qubit", 100.0, 3.13e-9),
];

#[derive(Serialize)]
struct ReproRow {
    preset: &'static str,
    lambda: f64,
    expected: f64,
    measured: Option<f64>,
    relative_error: Option<f64>,
    status: &'static str,
}

pub fn repro(a: &ReproArgs) -> Result<ExitCode> {
    if !(a.tolerance.is_finite() && a.tolerance >= 0.0) {
        bail!("--tolerance must be a non-negative number");
    }
    let opts = EigenOptions::default();
    let mut rows = Vec::new();
    for (name, lambda, expected) in REFERENCE {
        let c = preset(name)?.with_lambda(lambda);
        if a.skip_slow && build_basis(&c)?.dimension() > opts.dense_threshold {
            rows.push(ReproRow {
                preset: name,
                lambda,
                expected,
                measured: None,
                relative_error: None,
                status: "skipped",
            });
            continue;
        }
        let row = match spectral_gap(&c, &opts) {
            Ok(g) => {
                let rel = (g.gap - expected).abs() / expected;
                let status = if rel <= a.tolerance { "pass" } else { "fail" };
                ReproRow { preset: name, lambda, expected, measured: Some(g.gap), relative_error: Some(rel), status }
            }
            Err(_) => ReproRow { preset: name, lambda, expected, measured: None, relative_error: None, status: "fail" },
        };
        rows.push(row);
    }
    println!("{:<20} {:>10} {:>11} {:>11} {:>9}  status", "circuit", "lambda", "expected", "measured", "rel err");
    for r in &rows {
        println!(
            "{:<20} {:>10.4} {:>11} {:>11} {:>9}  {}",
            r.preset,
            r.lambda,
            sci(r.expected),
            r.measured.map_or_else(|| "-".into(), sci),
            r.relative_error.map_or_else(|| "-".into(), |e| format!("{:.2}%", e * 100.0)),
            r.status
        );
    }
    let failed = rows.iter().filter(|r| r.status == "fail").count();
    let checked = rows.iter().filter(|r| r.status != "skipped").count();
    println!(
        "{}/{checked} rows within {:.2}% ({} skipped)",
        checked - failed,
        a.tolerance * 100.0,
        rows.len() - checked
    );
    if let Some(dir) = &a.out {
        write_json(dir, "repro.json", &rows)?;
    }
    Ok(code(failed == 0))
}
