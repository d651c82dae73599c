use gsqc_core::eigen::dense_lowest;
use gsqc_core::*;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn gate() -> impl Strategy<Value = Gate> {
    prop_oneof![
        Just(Gate::I),
        Just(Gate::X),
        Just(Gate::H),
        (1u32..4).prop_map(Gate::Rk),
        (1u32..4).prop_map(Gate::RkDag)
    ]
}

fn boundary() -> impl Strategy<Value = BoundaryCondition> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 1e-2)
        .prop_map(|(x, y, z)| {
            let n = (x * x + y * y + z * z).sqrt();
            BoundaryCondition::new([x / n, y / n, z / n])
        })
}

/// Two columns with random single-qubit gates, one coupling and Boost terminals.
fn two_qubit() -> impl Strategy<Value = CircuitSpec> {
    (
        boundary(),
        boundary(),
        prop::collection::vec(gate(), 0..3),
        prop::collection::vec(gate(), 0..3),
        gate(),
        prop::collection::vec(gate(), 0..2),
        1.0..20.0f64,
    )
        .prop_map(|(b0, b1, pre0, pre1, target_gate, post, lambda)| {
            let unitary = |g: &Gate| RowOp::unitary(g.clone());
            let mut r0: Vec<RowOp> = pre0.iter().map(unitary).collect();
            let mut r1: Vec<RowOp> = pre1.iter().map(unitary).collect();
            let (c_row, t_row) = (r0.len() + 1, r1.len() + 1);
            r0.push(RowOp::CoupledControl { partner: "t".into(), partner_row: t_row });
            r1.push(RowOp::CoupledTarget { gate: target_gate, partner: "c".into(), partner_row: c_row });
            r1.extend(post.iter().map(unitary));
            r0.push(RowOp::Boost { lambda });
            r1.push(RowOp::Boost { lambda });
            CircuitSpec::new(vec![QubitSpec::new("c", b0, r0), QubitSpec::new("t", b1, r1)])
        })
}

fn norm(x: &[C64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn basis_is_a_bijection(c in two_qubit()) {
        let b = build_basis(&c).unwrap();
        for i in 0..b.dimension() {
            let cfg = b.decode(i).unwrap();
            prop_assert_eq!(b.index_of(&cfg).unwrap(), i);
        }
        prop_assert!(b.decode(b.dimension()).is_err());
    }

    #[test]
    fn hamiltonian_is_hermitian_and_frustration_free(c in two_qubit()) {
        prop_assert!(validate_circuit(&c).is_valid());
        let b = build_basis(&c).unwrap();
        let h = assemble(&c, &b).unwrap();
        prop_assert!(h.hermiticity_residual() <= 1e-12 * h.norm_bound());
        let psi = construct_ground_state(&c, &b).unwrap().normalized().unwrap();
        prop_assert!(residual_norm(&h, &psi).unwrap() <= 1e-10);
        for (term, r) in term_residuals(&c, &b, &psi).unwrap() {
            prop_assert!(r <= 1e-10, "term {} residual {}", term, r);
        }
        let low = dense_lowest(&h, 2, 4096).unwrap();
        prop_assert!(low[0].value.abs() <= 1e-9);
        prop_assert!(low[1].value > 1e-9);
    }

    #[test]
    fn variational_bound(c in two_qubit(), delta in 0.01..2.0f64, seed in 0usize..1000) {
        let b = build_basis(&c).unwrap();
        let h = assemble(&c, &b).unwrap();
        let psi = construct_ground_state(&c, &b).unwrap().normalized().unwrap();
        let gap = dense_lowest(&h, 2, 4096).unwrap()[1].value;
        let p = psi.amps();
        let mut phi: Vec<C64> = (0..p.len()).map(|i| C64::new(((i * 7 + seed) % 13) as f64 - 6.0, ((i + seed) % 5) as f64)).collect();
        let overlap: C64 = p.iter().zip(&phi).map(|(a, x)| a.conj() * x).sum();
        phi.iter_mut().zip(p).for_each(|(x, a)| *x -= overlap * a);
        let n = norm(&phi);
        prop_assume!(n > 1e-6);
        let mixed: Vec<C64> = p.iter().zip(&phi).map(|(a, x)| a + delta * x / n).collect();
        let e = residual_energy(&h, &StateVector::new(mixed)).unwrap();
        prop_assert!(e >= delta * delta / (1.0 + delta * delta) * gap * (1.0 - 1e-6));
    }

    #[test]
    fn circuit_json_round_trip(c in two_qubit()) {
        let back = from_json(&to_json(&c)).unwrap();
        prop_assert_eq!(circuit_hash(&back), circuit_hash(&c));
    }

    #[test]
    fn row_profiles_sum_to_one(c in two_qubit()) {
        let b = build_basis(&c).unwrap();
        let psi = construct_ground_state(&c, &b).unwrap().normalized().unwrap();
        for id in ["c", "t"] {
            let p = row_profile(&psi, &b, id).unwrap();
            prop_assert!((p.probability.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
