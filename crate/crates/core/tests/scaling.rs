use gsqc_core::analysis::{fit_power_law, upstream_to_final_ratio};
use gsqc_core::eigen::dense_lowest;
use gsqc_core::*;

const SQRT10: f64 = 3.162_277_660_168_379_5;

fn dense_gap(c: &CircuitSpec) -> f64 {
    spectral_gap(c, &EigenOptions::default()).unwrap().gap
}

fn slope(base: &CircuitSpec, lambdas: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = lambdas.iter().map(|&l| (l, dense_gap(&base.with_lambda(l)))).collect();
    fit_power_law(&pts, Window::ALL).unwrap().slope
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

#[test]
fn mixed_terminals_scale_like_two_boosts() {
    let s = slope(&preset("paper-2qubit-mixed").unwrap(), &log_grid(10.0, 100.0, 5));
    assert!((s + 4.0).abs() <= 0.3, "{s}");
}

#[test]
fn chain_gap_shrinks_as_lambda_to_minus_two_n() {
    for n in [2, 3] {
        let s = slope(&chain_circuit(n, 1, 10.0).unwrap(), &log_grid(SQRT10, 10.0 * SQRT10, 5));
        assert!((s + 2.0 * n as f64).abs() <= 0.3, "N={n}: {s}");
    }
}

#[test]
fn chain_sweep_is_monotone() {
    let t =
        lambda_sweep("chain-3", |l| chain_circuit(3, 1, l), &[1.0, SQRT10, 10.0], &EigenOptions::default()).unwrap();
    let g = t.gaps();
    assert_eq!(g.len(), 3);
    assert!(g.windows(2).all(|w| w[1].1 < w[0].1), "{g:?}");
}

#[test]
fn free_qubit_profile_is_uniform() {
    let c = preset("free-6row").unwrap();
    let b = build_basis(&c).unwrap();
    let psi = construct_ground_state(&c, &b).unwrap().normalized().unwrap();
    let p = row_profile(&psi, &b, "q0").unwrap();
    assert_eq!(p.probability.len(), 6);
    assert!(p.probability.iter().all(|x| (x - 1.0 / 6.0).abs() < 1e-10));
}

#[test]
fn boost_qubit_final_row_weight() {
    for (n, lambda) in [(6usize, 10.0), (6, 100.0), (4, 30.0)] {
        let c = single_qubit_circuit(n, Some(RowOp::Boost { lambda }), BoundaryCondition::zero()).unwrap();
        let b = build_basis(&c).unwrap();
        let psi = construct_ground_state(&c, &b).unwrap().normalized().unwrap();
        let p = row_profile(&psi, &b, "q0").unwrap();
        let want = lambda * lambda / (lambda * lambda + n as f64 - 1.0);
        assert!((p.probability[n - 1] - want).abs() < 1e-12);
    }
}

/// Lowest two eigenvectors of the two-qubit benchmark at `lambda`.
fn benchmark_states(lambda: f64) -> (BasisMap, Vec<EigenPair>) {
    let c = preset("paper-2qubit").unwrap().with_lambda(lambda);
    let b = build_basis(&c).unwrap();
    let h = assemble(&c, &b).unwrap();
    let pairs = dense_lowest(&h, 2, 4096).unwrap();
    (b, pairs)
}

const COUPLING_ROW: usize = 2;

#[test]
fn control_upstream_row_amplitude() {
    let (b, pairs) = benchmark_states(10.0);
    let r = upstream_to_final_ratio(&pairs[0].vector, &b, "q0", 1).unwrap();
    let want = 2f64.sqrt() / 100.0;
    assert!((r - want).abs() / want < 0.3, "{r}");
}

#[test]
fn excited_state_upstream_weight_scaling() {
    let (b_lo, lo) = benchmark_states(SQRT10);
    let (b_hi, hi) = benchmark_states(10.0);
    let ratio = |q: &str| {
        upstream_weight(&hi[1].vector, &b_hi, q, COUPLING_ROW).unwrap()
            / upstream_weight(&lo[1].vector, &b_lo, q, COUPLING_ROW).unwrap()
    };
    let control = ratio("q0");
    let target = ratio("q1");
    assert!((control - 0.1).abs() <= 0.05, "{control}");
    assert!((target - 1.0 / SQRT10).abs() <= 0.5 / SQRT10, "{target}");
}

#[test]
fn weight_below_cut_gives_zero_upstream() {
    let c = single_qubit_circuit(4, Some(RowOp::Boost { lambda: 10.0 }), BoundaryCondition::zero()).unwrap();
    let b = build_basis(&c).unwrap();
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); b.dimension()];
    amps[b.dimension() - 1] = num_complex::Complex64::new(1.0, 0.0);
    assert_eq!(upstream_weight(&StateVector::new(amps), &b, "q0", 3).unwrap(), 0.0);
}

#[test]
fn benchmark_success_probability() {
    let (b, pairs) = benchmark_states(10.0);
    let p = final_row_success_probability(&pairs[0].vector, &b).unwrap();
    assert!(p >= (1.0 - 4.0 / 100.0f64).powi(2), "{p}");
    assert!(p <= 1.0);
}

#[test]
fn independent_boost_qubits_multiply() {
    let single =
        |n: usize, l: f64| single_qubit_circuit(n, Some(RowOp::Boost { lambda: l }), BoundaryCondition::one()).unwrap();
    let a = single(4, 5.0);
    let mut q2 = single(6, 8.0).qubits.remove(0);
    q2.id = "q1".into();
    let both = CircuitSpec::new(vec![a.qubits[0].clone(), q2]);
    let prob = |c: &CircuitSpec| {
        let b = build_basis(c).unwrap();
        let psi = construct_ground_state(c, &b).unwrap().normalized().unwrap();
        final_row_success_probability(&psi, &b).unwrap()
    };
    let want = 25.0 / 28.0 * (64.0 / 69.0);
    assert!((prob(&both) - want).abs() < 1e-12);
}
