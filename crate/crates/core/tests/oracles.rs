//! Reference values computed independently of the library's own code paths.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use dj422::circuits::{self, OracleId};
use dj422::code::{self, DictionaryName};
use dj422::experiment::{self, Encoding};
use dj422::ftverify::verify_fault_tolerance;
use dj422::noise::{
    enumerate_faults, sites, FaultLocation, FaultPauli, FaultSampler, NoiseModel, PauliFault,
};
use dj422::sim::{
    apply_circuit, apply_circuit_with_faults, sample_shots_with, Circuit, GateKind, Matrix,
    Parallelism, Pauli, Segment, StateVector,
};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli(p: char) -> Matrix {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match p {
        'I' => Matrix::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => Matrix::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => Matrix::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => Matrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => unreachable!(),
    }
}

/// Single-qubit gates as Pauli sums.
fn one(kind: GateKind) -> Matrix {
    let (x, y, z, id) = (pauli('X'), pauli('Y'), pauli('Z'), pauli('I'));
    let proj0 = (&id + &z) * c(0.5, 0.0);
    let proj1 = (&id - &z) * c(0.5, 0.0);
    match kind {
        GateKind::X => x,
        GateKind::Y => y,
        GateKind::Z => z,
        GateKind::H => (x + z) * c(FRAC_1_SQRT_2, 0.0),
        GateKind::S => proj0 + proj1 * c(0.0, 1.0),
        GateKind::Sdg => proj0 + proj1 * c(0.0, -1.0),
        GateKind::Gpi(t) => {
            let phi = 2.0 * PI * t.to_f64();
            x * c(phi.cos(), 0.0) + y * c(phi.sin(), 0.0)
        }
        GateKind::Gpi2(t) => {
            let phi = 2.0 * PI * t.to_f64();
            let axis = x * c(phi.cos(), 0.0) + y * c(phi.sin(), 0.0);
            (id - axis * c(0.0, 1.0)) * c(FRAC_1_SQRT_2, 0.0)
        }
        k => panic!("{k:?} is not a one-qubit gate"),
    }
}

/// Two-qubit gates as sums of products `coeff · A ⊗ B`.
fn two(kind: GateKind) -> Vec<(Complex64, char, char)> {
    let h = FRAC_1_SQRT_2;
    match kind {
        // |0⟩⟨0|⊗I + |1⟩⟨1|⊗X
        GateKind::Cnot => vec![
            (c(0.5, 0.0), 'I', 'I'),
            (c(0.5, 0.0), 'Z', 'I'),
            (c(0.5, 0.0), 'I', 'X'),
            (c(-0.5, 0.0), 'Z', 'X'),
        ],
        GateKind::Cz => vec![
            (c(0.5, 0.0), 'I', 'I'),
            (c(0.5, 0.0), 'Z', 'I'),
            (c(0.5, 0.0), 'I', 'Z'),
            (c(-0.5, 0.0), 'Z', 'Z'),
        ],
        GateKind::Swap => ['I', 'X', 'Y', 'Z'].map(|p| (c(0.5, 0.0), p, p)).to_vec(),
        GateKind::Ms => vec![(c(h, 0.0), 'I', 'I'), (c(0.0, -h), 'X', 'X')],
        k => panic!("{k:?} is not a two-qubit gate"),
    }
}

fn kron_chain(factors: Vec<Matrix>) -> Matrix {
    factors.into_iter().reduce(|a, b| a.kronecker(&b)).unwrap()
}

/// Full 2^n operator, qubit 0 leftmost.
fn full_operator(kind: GateKind, qubits: &[usize], n: usize) -> Matrix {
    match qubits {
        [q] => kron_chain(
            (0..n)
                .map(|k| if k == *q { one(kind) } else { pauli('I') })
                .collect(),
        ),
        [a, b] => {
            let dim = 1 << n;
            let mut m = Matrix::zeros(dim, dim);
            for (coeff, pa, pb) in two(kind) {
                let term = kron_chain(
                    (0..n)
                        .map(|k| match k {
                            k if k == *a => pauli(pa),
                            k if k == *b => pauli(pb),
                            _ => pauli('I'),
                        })
                        .collect(),
                );
                m += term * coeff;
            }
            m
        }
        _ => unreachable!(),
    }
}

fn reference_state(circuit: &Circuit) -> DVector<Complex64> {
    let n = circuit.n_qubits();
    let mut v = DVector::from_element(1 << n, c(0.0, 0.0));
    v[0] = c(1.0, 0.0);
    for (_, op) in circuit.gates() {
        v = full_operator(op.kind, &op.qubits, n) * v;
    }
    v
}

#[test]
fn kronecker_reference_agrees_on_catalog() {
    for name in circuits::list() {
        let circuit = circuits::program(&name).unwrap().circuit;
        let want = reference_state(&circuit);
        let zero = StateVector::zero(circuit.n_qubits()).unwrap();
        let got = apply_circuit(&circuit, &zero, None).unwrap();
        let err = got
            .amplitudes()
            .iter()
            .zip(want.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{name}: {err:e}");
    }
}

fn ket(bits: &str) -> usize {
    usize::from_str_radix(bits, 2).unwrap()
}

#[test]
fn brute_force_codewords() {
    // Conventional basis: keep bit strings satisfying every Z-type check
    // (ZZZZ even, ZZII and ZIZI fixed by the logical value), then pair each
    // with its XXXX partner.
    let basis = code::computational_basis(DictionaryName::Conventional).unwrap();
    for (index, state) in basis.iter().enumerate() {
        let (a, b) = ((index >> 1) as u32, (index & 1) as u32);
        let support: Vec<usize> = (0..16usize)
            .filter(|&v| {
                let bit = |q: usize| ((v >> (3 - q)) & 1) as u32;
                v.count_ones() % 2 == 0 && bit(0) ^ bit(1) == a && bit(0) ^ bit(2) == b
            })
            .collect();
        assert_eq!(support.len(), 2);
        assert_eq!(support[0] ^ support[1], 0b1111);
        let mut want = vec![c(0.0, 0.0); 16];
        for &s in &support {
            want[s] = c(FRAC_1_SQRT_2, 0.0);
        }
        let want = StateVector::from_amplitudes(want).unwrap();
        assert!(state.equals_up_to_phase(&want, 1e-12), "|{a}{b}⟩");
    }
    // The `paper` dictionary's |00⟩ is fixed by XIXI, ZIZI and both stabilizers.
    let zero = &code::computational_basis(DictionaryName::Paper).unwrap()[0];
    let mut want = vec![c(0.0, 0.0); 16];
    for s in ["0000", "1010", "0101", "1111"] {
        want[ket(s)] = c(0.5, 0.0);
    }
    assert!(zero.equals_up_to_phase(&StateVector::from_amplitudes(want).unwrap(), 1e-12));
}

fn gate_arity_counts(circuit: &Circuit) -> (usize, usize) {
    let ones = circuit
        .gates()
        .filter(|(_, op)| op.qubits.len() == 1)
        .count();
    let twos = circuit
        .gates()
        .filter(|(_, op)| op.qubits.len() == 2)
        .count();
    (ones, twos)
}

#[test]
fn fault_counts_by_arithmetic() {
    for name in circuits::list() {
        let circuit = circuits::program(&name).unwrap().circuit;
        let (ones, twos) = gate_arity_counts(&circuit);
        let n = circuit.n_qubits();
        let want = 3 * ones + 15 * twos + n;
        assert_eq!(
            enumerate_faults(&sites(&circuit, false, false)).len(),
            want,
            "{name}"
        );
        assert_eq!(
            enumerate_faults(&sites(&circuit, true, false)).len(),
            want + n,
            "{name}"
        );
    }
    // 8 one-qubit gates and 2 CNOTs in preparation and readout, plus the
    // oracle's own gates: none, six, six, two.
    for (o, oracle_gates) in OracleId::ALL.into_iter().zip([0, 6, 6, 2]) {
        let r = verify_fault_tolerance(
            &circuits::program(&format!("encoded-dj:{o}")).unwrap(),
            false,
        )
        .unwrap();
        assert_eq!(r.total, 8 * 3 + 2 * 15 + 4 + 3 * oracle_gates, "{o}");
    }
}

#[test]
fn expected_fault_count() {
    let circuit = circuits::encoded_dj(OracleId::F0).unwrap();
    let m = NoiseModel::CALIBRATED;
    let want: f64 = 8.0 * 0.0095 + 2.0 * 0.0125 + 4.0 * 0.0068;
    assert!((want - 0.1282).abs() < 1e-12);
    let sampler = FaultSampler::new(&circuit, &m);
    assert!((sampler.expected_faults() - want).abs() < 1e-12);
    let var = 8.0 * 0.0095 * (1.0 - 0.0095)
        + 2.0 * 0.0125 * (1.0 - 0.0125)
        + 4.0 * 0.0068 * (1.0 - 0.0068);
    let draws = 200_000;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let total: usize = (0..draws).map(|_| sampler.sample(&mut rng).len()).sum();
    let mean = total as f64 / draws as f64;
    let sigma = (var / draws as f64).sqrt();
    assert!(
        (mean - want).abs() < 3.0 * sigma,
        "mean {mean}, want {want} ± {sigma}"
    );
}

/// Every combination of faults on the bare f0 circuit, weighted exactly.
fn exact_wrong_answer(model: &NoiseModel) -> f64 {
    let p = circuits::program("bare-dj:f0").unwrap();
    let zero = StateVector::zero(2).unwrap();
    let gates: Vec<usize> = p.circuit.gates().map(|(i, _)| i).collect();
    let meas = [0usize, 1];
    let options_gate = [None, Some(Pauli::X), Some(Pauli::Y), Some(Pauli::Z)];
    let mut wrong = 0.0;
    let combos = 4usize.pow(gates.len() as u32) << meas.len();
    for code in 0..combos {
        let mut rest = code;
        let mut weight = 1.0;
        let mut faults = Vec::new();
        for &g in &gates {
            let pick = options_gate[rest % 4];
            rest /= 4;
            match pick {
                None => weight *= 1.0 - model.p1,
                Some(pl) => {
                    weight *= model.p1 / 3.0;
                    faults.push(PauliFault::after_gate(g, FaultPauli::Single(pl)));
                }
            }
        }
        for &q in &meas {
            if rest % 2 == 1 {
                weight *= model.p_meas;
                faults.push(PauliFault {
                    location: FaultLocation::PreMeasure { qubit: q },
                    pauli: FaultPauli::Flip,
                });
            } else {
                weight *= 1.0 - model.p_meas;
            }
            rest /= 2;
        }
        let state = apply_circuit_with_faults(&p.circuit, &zero, &faults).unwrap();
        let d = p
            .decode_distribution(&p.register_distribution(&state).unwrap())
            .unwrap();
        wrong += weight * d.distribution.get("0").copied().unwrap_or(0.0);
    }
    wrong
}

#[test]
fn monte_carlo_matches_exact_enumeration() {
    let m = NoiseModel::CALIBRATED;
    let exact = exact_wrong_answer(&m);
    assert!((exact - 0.025305).abs() < 5e-6, "{exact}");
    let shots = 400_000;
    let p = circuits::program("bare-dj:f0").unwrap();
    let r = experiment::run(&p, shots, &m, 5, Parallelism::Auto).unwrap();
    let sigma = (exact * (1.0 - exact) / shots as f64).sqrt();
    assert!(
        (r.distance - exact).abs() < 4.0 * sigma,
        "{} vs {exact} ± {sigma}",
        r.distance
    );
}

fn chi_square(counts: &BTreeMap<String, u64>, bins: usize, shots: u64) -> f64 {
    let e = shots as f64 / bins as f64;
    let seen: f64 = counts.values().map(|&o| (o as f64 - e).powi(2) / e).sum();
    seen + (bins - counts.len()) as f64 * e
}

#[test]
fn uniform_sampling_passes_chi_square() {
    let mut c = Circuit::new("uniform", 4).unwrap();
    for q in 0..4 {
        c.gate(GateKind::H, &[q], Segment::Prep).unwrap();
    }
    c.measure_all().unwrap();
    let shots = 32_000;
    for seed in [1, 2, 3] {
        let counts = sample_shots_with(&c, shots, None, seed, Parallelism::Auto).unwrap();
        // 15 degrees of freedom, 0.1% upper tail.
        let x2 = chi_square(&counts.counts, 16, shots);
        assert!(x2 < 37.697, "seed {seed}: {x2}");
    }
    let e = circuits::program("entangled:E:bare").unwrap().circuit;
    let counts = sample_shots_with(&e, shots, None, 9, Parallelism::Auto).unwrap();
    // 3 degrees of freedom.
    assert!(chi_square(&counts.counts, 4, shots) < 16.266);
}

#[test]
fn noise_grows_with_two_qubit_error_rate() {
    let p2s = [0.0, 0.02, 0.05, 0.1];
    let rows = experiment::sweep(
        &[0.0095],
        &p2s,
        &[0.0068],
        &[OracleId::Fx],
        20_000,
        3,
        Encoding::Clifford,
        Parallelism::Auto,
    )
    .unwrap();
    let fx: Vec<_> = rows.iter().filter(|r| r.row.circuit == "fx").collect();
    assert_eq!(fx.len(), p2s.len());
    for w in fx.windows(2) {
        assert!(w[0].p2 < w[1].p2);
        assert!(
            w[1].row.d_bare > w[0].row.d_bare,
            "{} -> {}",
            w[0].row.d_bare,
            w[1].row.d_bare
        );
        assert!(w[1].row.post_selection_ratio < w[0].row.post_selection_ratio);
    }
}
