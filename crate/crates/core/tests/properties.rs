use std::f64::consts::TAU;

use proptest::prelude::*;
use qutrit_ecc::error_model::{angle_distance, pauli_decompose, reduce_to_rotation, superposition_error};
use qutrit_ecc::measure::eigenprojectors_order3;
use qutrit_ecc::{
    build, measure, BranchScript, CMatrix, Complex64, GateName, GateOperator, LogicalQutrit, NineQutritCode,
    ProjectorFamily, QutritRegister, SuperpositionErrorSpec,
};

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn state(n: usize) -> impl Strategy<Value = QutritRegister> {
    prop::collection::vec(complex(), 3usize.pow(n as u32))
        .prop_filter("nonzero", |v| v.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(move |v| QutritRegister::normalized(n, v).unwrap())
}

fn single_gate() -> impl Strategy<Value = GateOperator> {
    prop_oneof![
        prop::sample::select(GateName::FIXED.to_vec())
            .prop_filter("one qutrit", |g| !matches!(g, GateName::C11 | GateName::C21)),
        (0.0..TAU, 0.0..TAU).prop_map(|(theta, phi)| GateName::Rtheta { theta, phi }),
    ]
    .prop_map(|g| build(g).unwrap())
}

/// Dense matrix of `gate` on `position` of an `n`-qutrit register, built
/// directly from the digit expansion of each basis index.
fn embedded(gate: &CMatrix, position: usize, n: usize) -> Vec<Vec<Complex64>> {
    let dim = 3usize.pow(n as u32);
    let stride = 3usize.pow((n - 1 - position) as u32);
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for (row, out) in m.iter_mut().enumerate() {
        let r = (row / stride) % 3;
        for c in 0..3 {
            let col = row - r * stride + c * stride;
            out[col] = gate[(r, c)];
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm(s in state(4), gates in prop::collection::vec((single_gate(), 0usize..4), 1..8)) {
        let mut s = s;
        for (g, p) in &gates {
            s.apply(g, &[*p]).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sequential_application_matches_product(s in state(3), a in single_gate(), b in single_gate(), p in 0usize..3) {
        let seq = s.applied(&a, &[p]).unwrap().applied(&b, &[p]).unwrap();
        let once = s.applied(&b.compose(&a).unwrap(), &[p]).unwrap();
        for (x, y) in seq.amplitudes().iter().zip(once.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn single_qutrit_gate_matches_dense_embedding(s in state(3), g in single_gate(), p in 0usize..3) {
        let fast = s.applied(&g, &[p]).unwrap();
        let dense = embedded(g.matrix(), p, 3);
        for (row, out) in dense.iter().zip(fast.amplitudes()) {
            let expect: Complex64 = row.iter().zip(s.amplitudes()).map(|(m, a)| m * a).sum();
            prop_assert!((expect - out).norm() < 1e-12);
        }
    }

    #[test]
    fn disjoint_gates_commute(s in state(4), a in single_gate(), b in single_gate()) {
        let ab = s.applied(&a, &[0]).unwrap().applied(&b, &[2]).unwrap();
        let ba = s.applied(&b, &[2]).unwrap().applied(&a, &[0]).unwrap();
        for (x, y) in ab.amplitudes().iter().zip(ba.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn local_gate_leaves_other_marginals(s in state(3), g in single_gate()) {
        let family = ProjectorFamily::computational(1).unwrap();
        let before = family.probabilities(&s, &[2]).unwrap();
        let after = family.probabilities(&s.applied(&g, &[0]).unwrap(), &[2]).unwrap();
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn measurement_is_complete_and_repeatable(s in state(3), pick in 0usize..3, p in 0usize..3) {
        let family = ProjectorFamily::computational(1).unwrap();
        let probs = family.probabilities(&s, &[p]).unwrap();
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let k = (pick..pick + 3).map(|k| k % 3).find(|&k| probs[k] > 1e-9).unwrap();
        let (label, post) = measure(&s, &family, &[p], &mut BranchScript::new(vec![k])).unwrap();
        prop_assert!((post.norm_sqr() - 1.0).abs() < 1e-12);
        let again = family.probabilities(&post, &[p]).unwrap();
        prop_assert!((again[k] - 1.0).abs() < 1e-12);
        let (label2, _) = measure(&post, &family, &[p], &mut BranchScript::default()).unwrap();
        prop_assert_eq!(label, label2);
    }

    #[test]
    fn order3_eigenprojectors_are_complete(s in state(2)) {
        let x = build(GateName::X1).unwrap();
        let family = eigenprojectors_order3(&x.tensor(&x)).unwrap();
        let probs = family.probabilities(&s, &[0, 1]).unwrap();
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition_is_linear(a in prop::collection::vec(complex(), 9), b in prop::collection::vec(complex(), 9), k in complex()) {
        let ma = CMatrix::from_vec(3, a).unwrap();
        let mb = CMatrix::from_vec(3, b).unwrap();
        let sum = &ma + &mb.scale(k);
        let da = pauli_decompose(&ma).unwrap();
        let db = pauli_decompose(&mb).unwrap();
        let ds = pauli_decompose(&sum).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                let expect = da.coefficient(u, v) + k * db.coefficient(u, v);
                prop_assert!((ds.coefficient(u, v) - expect).norm() < 1e-12);
            }
        }
        prop_assert!(ds.reconstruct().max_abs_diff(&sum) < 1e-12);
    }

    #[test]
    fn superposition_error_reduces_to_rotation(a in -10.0f64..10.0, b in -10.0f64..10.0, c in -10.0f64..10.0) {
        let op = superposition_error(SuperpositionErrorSpec { a, b, c }).unwrap();
        let r = reduce_to_rotation(&op).unwrap();
        prop_assert!(angle_distance(r.theta, b - a) < 1e-12);
        prop_assert!(angle_distance(r.phi, c - a) < 1e-12);
        prop_assert!(angle_distance(r.global, a) < 1e-12);
    }

    #[test]
    fn encode_decode_round_trip(a in complex(), b in complex(), c in complex()) {
        let norm = (a.norm_sqr() + b.norm_sqr() + c.norm_sqr()).sqrt();
        prop_assume!(norm > 1e-3);
        let q = LogicalQutrit::new(a / norm, b / norm, c / norm).unwrap();
        let code = NineQutritCode::shared();
        let decoded = code.decode(&code.encode(&q).unwrap()).unwrap();
        prop_assert!(decoded.residual < 1e-12);
        for (x, y) in decoded.coefficients.iter().zip(q.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }
}

#[test]
fn logical_basis_is_orthonormal() {
    let code = NineQutritCode::shared();
    for i in 0..3 {
        for j in 0..3 {
            let ip = code.logical_state(i).inner(code.logical_state(j)).unwrap();
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((ip - Complex64::new(expect, 0.0)).norm() < 1e-12, "<{i}|{j}> = {ip}");
        }
    }
}
