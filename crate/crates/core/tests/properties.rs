use dj422::circuits::{self, OracleId};
use dj422::code::{self, DictionaryName};
use dj422::experiment::statistical_distance;
use dj422::export;
use dj422::ftverify::{classify_fault, Classification};
use dj422::noise::{FaultPauli, NoiseModel, PauliFault};
use dj422::sim::{
    apply_circuit, gate_matrix, kron_all, outcome_distribution, sample_shots_with, Circuit,
    GateKind, Matrix, Parallelism, Pauli, Segment, StateVector, Turns,
};
use num_complex::Complex64;
use proptest::prelude::*;

const SEGMENTS: [Segment; 4] = [
    Segment::Prep,
    Segment::Logic,
    Segment::Oracle,
    Segment::Readout,
];

fn kind(tag: u8, numer: i64) -> GateKind {
    let t = Turns::new(numer, 64);
    match tag % 13 {
        0 => GateKind::X,
        1 => GateKind::Y,
        2 => GateKind::Z,
        3 => GateKind::H,
        4 => GateKind::S,
        5 => GateKind::Sdg,
        6 => GateKind::Gpi(t),
        7 => GateKind::Gpi2(t),
        8 => GateKind::Cnot,
        9 => GateKind::Cz,
        10 => GateKind::Swap,
        11 => GateKind::Ms,
        _ => GateKind::Barrier,
    }
}

fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec((any::<u8>(), 0..n, 0..n, -64i64..64, 0usize..4), 0..24).prop_map(
            move |ops| {
                let mut c = Circuit::new("random", n).unwrap();
                for (tag, a, b, numer, seg) in ops {
                    let k = kind(tag, numer);
                    let qubits: Vec<usize> = match k.arity() {
                        0 => vec![],
                        1 => vec![a],
                        _ if n < 2 || a == b => continue,
                        _ => vec![a, b],
                    };
                    c.gate(k, &qubits, SEGMENTS[seg]).unwrap();
                }
                c.measure_all().unwrap();
                c
            },
        )
    })
}

fn arb_distribution(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_filter_map("all zero", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-3).then(|| w.iter().map(|x| x / s).collect())
    })
}

fn arb_amplitudes(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_filter_map("zero", |v| {
        let a: Vec<Complex64> = v
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        let n = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        (n > 1e-3).then(|| a.into_iter().map(|x| x / n).collect())
    })
}

fn random_1q(picks: &[(bool, i64)]) -> Matrix {
    picks.iter().fold(Matrix::identity(2, 2), |u, &(two, k)| {
        let t = Turns::new(k, 1 << 16);
        let g = if two {
            GateKind::Gpi2(t)
        } else {
            GateKind::Gpi(t)
        };
        gate_matrix(g).unwrap() * u
    })
}

fn encoded_state(amps: &[Complex64]) -> StateVector {
    let basis = code::computational_basis(DictionaryName::Conventional).unwrap();
    let mut v = vec![Complex64::new(0.0, 0.0); 16];
    for (a, s) in amps.iter().zip(&basis) {
        for (x, y) in v.iter_mut().zip(s.amplitudes()) {
            *x += a * y;
        }
    }
    StateVector::from_amplitudes(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn circuits_preserve_norm(c in arb_circuit(), amps in arb_amplitudes(16)) {
        let n = c.n_qubits();
        let init = StateVector::from_amplitudes(amps[..1 << n].to_vec())
            .unwrap_or_else(|_| StateVector::zero(n).unwrap());
        let init = {
            let s = init.norm_sqr().sqrt();
            StateVector::from_amplitudes(init.amplitudes().iter().map(|a| a / s).collect()).unwrap()
        };
        let out = apply_circuit(&c, &init, None).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_identity(
        p1 in prop::collection::vec((any::<bool>(), 0i64..1 << 16), 1..4),
        p2 in prop::collection::vec((any::<bool>(), 0i64..1 << 16), 1..4),
    ) {
        let (u1, u2) = (random_1q(&p1), random_1q(&p2));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let bell = nalgebra::DVector::from_vec(vec![Complex64::new(r, 0.0), z, z, Complex64::new(r, 0.0)]);
        let lhs = kron_all(&[u1.clone(), u2.clone()]) * &bell;
        let rhs = kron_all(&[Matrix::identity(2, 2), &u2 * u1.transpose()]) * &bell;
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn gpi_pairs_are_diagonal(a in -256i64..256, b in -256i64..256) {
        let m = gate_matrix(GateKind::Gpi(Turns::new(a, 256))).unwrap()
            * gate_matrix(GateKind::Gpi(Turns::new(b, 256))).unwrap();
        prop_assert!(m[(0, 1)].norm() < 1e-12 && m[(1, 0)].norm() < 1e-12);
        prop_assert!((m[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distance_is_a_metric(
        p in arb_distribution(4),
        q in arb_distribution(4),
        r in arb_distribution(4),
    ) {
        let d = |a: &[f64], b: &[f64]| statistical_distance(a, b).unwrap();
        prop_assert!((d(&p, &q) - d(&q, &p)).abs() < 1e-15);
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + 1e-12);
        prop_assert_eq!(d(&p, &p), 0.0);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d(&p, &q)));
        if p != q {
            prop_assert!(d(&p, &q) > 0.0);
        }
    }

    #[test]
    fn json_round_trip(c in arb_circuit()) {
        prop_assert_eq!(export::from_json(&export::to_json(&c)).unwrap(), c);
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), oracle in 0usize..4, shots in 1u64..3000) {
        let c = circuits::encoded_dj(OracleId::ALL[oracle]).unwrap();
        let m = NoiseModel::CALIBRATED;
        let a = sample_shots_with(&c, shots, Some(&m), seed, Parallelism::Serial).unwrap();
        let b = sample_shots_with(&c, shots, Some(&m), seed, Parallelism::Threads(2)).unwrap();
        prop_assert_eq!(a.shots, shots);
        prop_assert_eq!(a.counts.values().sum::<u64>(), shots);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn single_z_is_never_a_logical_error(oracle in 0usize..4, native in any::<bool>(), pick in any::<prop::sample::Index>(), second in any::<bool>()) {
        let o = OracleId::ALL[oracle];
        let name = if native { format!("encoded-dj-native:{o}") } else { format!("encoded-dj:{o}") };
        let p = circuits::program(&name).unwrap();
        let gates: Vec<(usize, usize)> = p.circuit.gates().map(|(i, op)| (i, op.qubits.len())).collect();
        let (op, arity) = gates[pick.index(gates.len())];
        let pauli = match (arity, second) {
            (1, _) => FaultPauli::Single(Pauli::Z),
            (_, false) => FaultPauli::Pair(Pauli::Z, Pauli::I),
            (_, true) => FaultPauli::Pair(Pauli::I, Pauli::Z),
        };
        let v = classify_fault(&p, &PauliFault::after_gate(op, pauli), &p.ideal().unwrap()).unwrap();
        prop_assert_ne!(v.classification, Classification::LogicalError);
    }

    #[test]
    fn final_z_is_transparent(oracle in 0usize..4, q in 0usize..4) {
        let p = circuits::program(&format!("encoded-dj:{}", OracleId::ALL[oracle])).unwrap();
        let last = p.circuit.gates().filter(|(_, op)| op.qubits == [q]).last().unwrap().0;
        let f = PauliFault::after_gate(last, FaultPauli::Single(Pauli::Z));
        let v = classify_fault(&p, &f, &p.ideal().unwrap()).unwrap();
        prop_assert_eq!(v.classification, Classification::Harmless);
        prop_assert!((v.accept_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_x_is_detected(amps in arb_amplitudes(4), q in 0usize..4, y in any::<bool>()) {
        let mut s = encoded_state(&amps);
        s.apply_pauli(if y { Pauli::Y } else { Pauli::X }, q);
        let dist = outcome_distribution(&s, &[0, 1, 2, 3]).unwrap();
        for (bits, p) in dist {
            if p > 1e-12 {
                prop_assert!(!code::accept(&bits).unwrap(), "{bits} accepted");
            }
        }
    }

    #[test]
    fn decode_inverts_encode(amps in arb_amplitudes(4)) {
        let s = encoded_state(&amps);
        let mut got = [0.0; 4];
        for (bits, p) in outcome_distribution(&s, &[0, 1, 2, 3]).unwrap() {
            if p > 1e-14 {
                got[code::decode(&bits).unwrap().index()] += p;
            }
        }
        for (g, a) in got.iter().zip(&amps) {
            prop_assert!((g - a.norm_sqr()).abs() < 1e-12);
        }
    }
}

#[test]
fn original_dictionary_basis_decodes() {
    for (label, state) in code::logical_basis(DictionaryName::Paper).unwrap() {
        let first = u8::from(label.starts_with('-'));
        let second = label.as_bytes()[1] - b'0';
        for (bits, p) in outcome_distribution(&state, &[0, 1, 2, 3]).unwrap() {
            if p > 1e-14 {
                let o = code::decode(&bits).unwrap();
                assert_eq!((o.first, o.second), (first, second), "{label} {bits}");
            }
        }
    }
}
