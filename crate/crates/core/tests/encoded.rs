mod common;

use common::{c, max_diff, pauli, C};
use nalgebra::DMatrix;
use noiseless::dynamics::{CouplingKind, NoiseModel};
use noiseless::encoded::*;
use noiseless::linalg::{matexp, Operator};
use noiseless::pauli::centralizer_strings;
use noiseless::{Error, PauliString, Phase};
use std::f64::consts::PI;

fn frame(n: usize) -> LogicalFrame<f64> {
    LogicalFrame::build(n, 0).unwrap()
}

#[test]
fn frame_sizes() {
    for (n, k) in [(4, 2), (6, 4)] {
        let f = frame(n);
        assert_eq!(f.logical_qubits(), k);
        assert_eq!(f.code_dim(), 1 << k);
        assert_eq!(f.codespace().shape(), (1 << n, 1 << k));
        let gram = f.codespace().adjoint() * f.codespace();
        assert!(max_diff(&gram, &DMatrix::identity(1 << k, 1 << k)) < 1e-12);
    }
    assert!(LogicalFrame::<f64>::build(5, 0).is_err());
    assert!(LogicalFrame::<f64>::build(2, 0).is_err());
    assert!(LogicalFrame::<f64>::build(4, 4).is_err());
}

#[test]
fn codewords_are_joint_eigenvectors() {
    for block in 0..4 {
        let f = LogicalFrame::<f64>::build(4, block).unwrap();
        let (sx, sz) = f.signs();
        for (letters, s) in [("XXXX", sx), ("ZZZZ", sz)] {
            let g = pauli(letters);
            let diff = &g * f.codespace() - f.codespace() * c(s as f64, 0.0);
            assert!(
                diff.iter().all(|z| z.norm() < 1e-12),
                "block {block} {letters}"
            );
        }
    }
    let signs: Vec<(i8, i8)> = (0..4)
        .map(|b| LogicalFrame::<f64>::build(4, b).unwrap().signs())
        .collect();
    assert_eq!(signs, vec![(1, 1), (1, -1), (-1, 1), (-1, -1)]);
}

#[test]
fn logical_operators_lie_in_the_centralizer() {
    for n in [4, 6] {
        let f = frame(n);
        let gens = [
            PauliString::collective(n, 'X').unwrap(),
            PauliString::collective(n, 'Z').unwrap(),
        ];
        let cent = centralizer_strings(n, &gens).unwrap();
        for p in f.logical_x().iter().chain(f.logical_z()) {
            assert!(cent.contains(p), "{p}");
        }
    }
}

/// Physical image of a logical Pauli string: X -> Xbar, Z -> Zbar, Y -> i Xbar Zbar.
fn encode_pauli(f: &LogicalFrame<f64>, l: &PauliString) -> PauliString {
    let n = f.n();
    let mut out = PauliString::identity(n).unwrap().with_phase(l.phase());
    for j in 0..l.num_qubits() {
        let (x, z) = (&f.logical_x()[j], &f.logical_z()[j]);
        out = match l.letter(j) {
            'X' => out.mul(x).unwrap(),
            'Z' => out.mul(z).unwrap(),
            'Y' => out
                .mul(&x.mul(z).unwrap().with_phase(Phase::from_exponent(
                    x.mul(z).unwrap().phase().exponent() as i64 + 1,
                )))
                .unwrap(),
            _ => out,
        };
    }
    out
}

fn all_strings(k: usize) -> Vec<PauliString> {
    let mut out = Vec::new();
    for x in 0..(1u64 << k) {
        for z in 0..(1u64 << k) {
            for ph in 0..4 {
                out.push(PauliString::from_bits(k, x, z, Phase::from_exponent(ph)).unwrap());
            }
        }
    }
    out
}

#[test]
fn encoded_pauli_algebra_is_faithful() {
    let f = frame(4);
    let logical = all_strings(2);
    for a in &logical {
        for b in &logical {
            let lhs = encode_pauli(&f, a).mul(&encode_pauli(&f, b)).unwrap();
            assert_eq!(lhs, encode_pauli(&f, &a.mul(b).unwrap()), "{a} * {b}");
        }
    }
    // the restriction to the codespace is the logical matrix itself
    for a in logical.iter().filter(|p| p.phase() == Phase::PLUS_ONE) {
        let r = f.restrict(&encode_pauli(&f, a).to_operator()).unwrap();
        assert!(r.max_abs_diff(&a.to_operator()) < 1e-12, "{a}");
    }
}

#[test]
fn encoded_commutation_table() {
    for n in [4, 6] {
        let f = frame(n);
        let k = n - 2;
        for i in 0..k {
            for j in 0..k {
                let (xi, zj) = (&f.logical_x()[i], &f.logical_z()[j]);
                assert_eq!(xi.commutes(zj).unwrap(), i != j);
                assert!(xi.commutes(&f.logical_x()[j]).unwrap());
                assert!(f.logical_z()[i].commutes(zj).unwrap());
            }
        }
    }
}

#[test]
fn gate_generators_match_their_definitions() {
    let x1: Operator<f64> = encoded_gate_generator(4, GateKind::XRot(1)).unwrap();
    assert!(max_diff(x1.matrix(), &pauli("XXII")) < 1e-15);
    let z2: Operator<f64> = encoded_gate_generator(4, GateKind::ZRot(2)).unwrap();
    assert!(max_diff(z2.matrix(), &pauli("IIZZ")) < 1e-15);
    let ex: Operator<f64> = encoded_gate_generator(4, GateKind::Exchange(1, 2)).unwrap();
    let expected = pauli("IXXI") + pauli("IYYI") + pauli("IZZI");
    assert!(max_diff(ex.matrix(), &expected) < 1e-15);
    for g in ["XXXX", "ZZZZ"] {
        let g = pauli(g);
        let comm = ex.matrix() * &g - &g * ex.matrix();
        assert!(comm.iter().all(|z| z.norm() < 1e-12));
    }
    assert!(encoded_gate_generator::<f64>(4, GateKind::XRot(3)).is_err());
    assert!(encoded_gate_generator::<f64>(4, GateKind::Exchange(1, 1)).is_err());
}

#[test]
fn gate_generators_act_logically_and_preserve_the_code() {
    let f = frame(4);
    let cases: [(GateKind, DMatrix<C>); 5] = [
        (GateKind::XRot(1), pauli("XI")),
        (GateKind::ZRot(1), pauli("ZI")),
        (GateKind::XRot(2), pauli("IX")),
        (GateKind::ZRot(2), pauli("IZ")),
        (
            GateKind::Exchange(1, 2),
            pauli("XX") + pauli("YY") + pauli("ZZ"),
        ),
    ];
    for (kind, logical) in cases {
        let g = encoded_gate_generator::<f64>(4, kind).unwrap();
        assert!(
            max_diff(f.restrict(&g).unwrap().matrix(), &logical) < 1e-12,
            "{kind:?}"
        );
        for theta in [0.3, 1.1, PI] {
            let u = matexp(&g, theta).unwrap();
            assert!(f.leakage(&u).unwrap() < 1e-10);
        }
    }
}

#[test]
fn exchange_is_an_encoded_swap() {
    let check = encoded_swap_check(&frame(4), 1, 2, 1e-10).unwrap();
    assert!(check.passed);
    assert!(check.residual < 1e-10);
    assert!(check.leakage < 1e-10);
    let check = encoded_swap_check(&frame(6), 1, 3, 1e-10).unwrap();
    assert!(check.passed);
    assert!(matches!(
        encoded_swap_check(&frame(4), 1, 1, 1e-10),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        encoded_swap_check(&frame(4), 2, 1, 1e-10),
        Err(Error::Precondition(_))
    ));
    let s: Operator<f64> = logical_swap(2, 1, 2);
    assert!((&s * &s).max_abs_diff(&Operator::identity(4)) < 1e-15);
}

#[test]
fn half_exchange_angle_is_the_square_root_of_swap() {
    let h: Operator<f64> = logical_gate_hamiltonian(4, GateKind::Exchange(1, 2)).unwrap();
    let root = matexp(&h, PI / 2.0).unwrap();
    let swap = matexp(&h, PI).unwrap();
    assert!((&root * &root).max_abs_diff(&swap) < 1e-12);
    assert!(swap.max_abs_diff(&logical_swap(2, 1, 2)) < 1e-12);
}

#[test]
fn encoded_generators_are_universal_on_two_logical_qubits() {
    let f = frame(4);
    let kinds = [
        GateKind::XRot(1),
        GateKind::ZRot(1),
        GateKind::XRot(2),
        GateKind::ZRot(2),
        GateKind::Exchange(1, 2),
    ];
    let restricted: Vec<Operator<f64>> = kinds
        .iter()
        .map(|&k| f.restrict(&encoded_gate_generator(4, k).unwrap()).unwrap())
        .collect();
    assert!(lie_algebra_dimension(&restricted, 1e-10) >= 15);
    assert_eq!(lie_algebra_dimension(&restricted[..2], 1e-10), 3);
    assert_eq!(lie_algebra_dimension::<f64>(&[], 1e-10), 0);
}

fn quiet_model() -> NoiseModel<f64> {
    NoiseModel::seeded(4, 1, CouplingKind::Independent, 0.0, 3).unwrap()
}

#[test]
fn empty_circuit_is_perfect() {
    let out = run_encoded_circuit_under_decoupling(
        &frame(4),
        &[],
        &quiet_model(),
        0.5,
        &ControlLimits::default(),
    )
    .unwrap();
    assert!((out.process_fidelity - 1.0).abs() < 1e-12);
    assert_eq!(out.total_cycles, 0);
}

#[test]
fn logical_flip_is_transparent_to_the_decoupler() {
    let circuit = [Gate::new(GateKind::XRot(1), PI)];
    for tc in [1.0, 0.37] {
        let out = run_encoded_circuit_under_decoupling(
            &frame(4),
            &circuit,
            &quiet_model(),
            tc,
            &ControlLimits::default(),
        )
        .unwrap();
        assert!((out.process_fidelity - 1.0).abs() < 1e-8, "tc {tc}");
        assert!(out.total_time * 0.2 >= PI - 1e-9);
    }
}

#[test]
fn entangler_improves_with_faster_cycles() {
    let model = NoiseModel::seeded(4, 1, CouplingKind::Independent, 0.1, 3).unwrap();
    let circuit = [
        Gate::new(GateKind::Exchange(1, 2), PI / 2.0).with_duration(10.0),
        Gate::new(GateKind::XRot(1), PI / 2.0).with_duration(10.0),
        Gate::new(GateKind::ZRot(2), PI / 2.0).with_duration(10.0),
    ];
    let mut last = 0.0;
    for tc in [1.0, 0.5, 0.25, 0.125] {
        let out = run_encoded_circuit_under_decoupling(
            &frame(4),
            &circuit,
            &model,
            tc,
            &ControlLimits::default(),
        )
        .unwrap();
        assert!(
            out.process_fidelity > last,
            "tc {tc}: {} vs {last}",
            out.process_fidelity
        );
        last = out.process_fidelity;
    }
    assert!(last > 0.99);
}

#[test]
fn illegal_circuits_are_rejected() {
    let limits = ControlLimits::default();
    let bad = [Gate::new(GateKind::Physical(1, 'X'), 0.5)];
    let err = run_encoded_circuit_under_decoupling(&frame(4), &bad, &quiet_model(), 0.5, &limits);
    assert!(matches!(err, Err(Error::Symmetry { .. })));
    let short = [Gate::new(GateKind::XRot(1), 0.5).with_duration(2.0)];
    let err = run_encoded_circuit_under_decoupling(&frame(4), &short, &quiet_model(), 0.5, &limits);
    assert!(matches!(err, Err(Error::Precondition(_))));
    let strong = [Gate::new(GateKind::XRot(1), PI).with_duration(10.0)];
    let err =
        run_encoded_circuit_under_decoupling(&frame(4), &strong, &quiet_model(), 0.5, &limits);
    assert!(matches!(err, Err(Error::Precondition(_))));
}

#[test]
fn gate_timing() {
    let limits = ControlLimits::default();
    // pi at strength 0.2 needs 15.7 time units
    assert_eq!(
        gate_cycles(&Gate::new(GateKind::XRot(1), PI), 1.0, &limits).unwrap(),
        16
    );
    assert_eq!(
        gate_cycles(&Gate::new(GateKind::XRot(1), 0.1), 1.0, &limits).unwrap(),
        10
    );
    assert_eq!(
        gate_cycles(
            &Gate::new(GateKind::XRot(1), 1.0).with_duration(6.0),
            0.5,
            &limits
        )
        .unwrap(),
        12
    );
}

#[test]
fn j0_sector_is_a_noiseless_qubit() {
    let q = j0_noiseless_qubit::<f64>(4).unwrap();
    assert_eq!(q.isometry().shape(), (16, 2));
    let v = q.verify(100, 42).unwrap();
    assert_eq!(v.samples, 100);
    assert!(v.max_infidelity < 1e-9, "{}", v.max_infidelity);
    assert!(v.max_collective_action < 1e-10);
    assert!(j0_noiseless_qubit::<f64>(3).is_err());
}
