use std::collections::BTreeMap;

use num_complex::Complex64;

use super::circuit::{Circuit, MAX_QUBITS};
use super::gate::{gate_matrix, GateKind, Matrix, Pauli};
use crate::error::{Error, Result};
use crate::noise::PauliFault;

/// Probabilities at or below this are treated as exactly zero.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// Dense amplitudes over the computational basis. Index bit `n-1-q` holds
/// qubit `q`, so qubit 0 is the leftmost character of a basis label.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::usage(format!("unsupported qubit count {n_qubits}")));
        }
        let dim = 1 << n_qubits;
        if index >= dim {
            return Err(Error::Dimension {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Builds a state from raw amplitudes; the norm must be 1 within 1e-12.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::usage(format!(
                "{dim} amplitudes is not a qubit register"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::usage(format!("unsupported qubit count {n_qubits}")));
        }
        let s = StateVector { n_qubits, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::usage(format!("state norm² is {norm}, expected 1")));
        }
        Ok(s)
    }

    /// Sum of `coeff * |label⟩` terms, normalised. Labels are bit strings.
    pub fn from_kets(terms: &[(&str, Complex64)]) -> Result<Self> {
        let n = terms
            .first()
            .map(|(l, _)| l.len())
            .ok_or_else(|| Error::usage("no kets given"))?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (label, c) in terms {
            amps[parse_bits(label, n)?] += c;
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::usage("kets sum to the zero vector"));
        }
        Self::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩| = 1 within `tol`, i.e. equal up to a global phase.
    pub fn equals_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.n_qubits == other.n_qubits && (self.inner(other).norm() - 1.0).abs() <= tol
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n_qubits - 1 - q)
    }

    pub fn apply_1q(&mut self, u: &Matrix, q: usize) {
        let m = self.mask(q);
        let (a, b, c, d) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let (x, y) = (self.amps[i], self.amps[i | m]);
                self.amps[i] = a * x + b * y;
                self.amps[i | m] = c * x + d * y;
            }
        }
    }

    /// Applies a 4×4 matrix whose basis is |q_hi q_lo⟩.
    pub fn apply_2q(&mut self, u: &Matrix, q_hi: usize, q_lo: usize) {
        let (mh, ml) = (self.mask(q_hi), self.mask(q_lo));
        for i in 0..self.amps.len() {
            if i & mh == 0 && i & ml == 0 {
                let idx = [i, i | ml, i | mh, i | mh | ml];
                let v = idx.map(|k| self.amps[k]);
                for (r, &k) in idx.iter().enumerate() {
                    self.amps[k] = (0..4).map(|c| u[(r, c)] * v[c]).sum();
                }
            }
        }
    }

    pub fn apply_pauli(&mut self, p: Pauli, q: usize) {
        let m = self.mask(q);
        match p {
            Pauli::I => {}
            Pauli::X => {
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            Pauli::Z => {
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *a = -*a;
                    }
                }
            }
            Pauli::Y => {
                let i_unit = Complex64::new(0.0, 1.0);
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let (x, y) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = -i_unit * y;
                        self.amps[i | m] = i_unit * x;
                    }
                }
            }
        }
    }

    pub fn apply_gate(&mut self, kind: GateKind, qubits: &[usize]) -> Result<()> {
        let u = gate_matrix(kind)?;
        match qubits {
            [q] => self.apply_1q(&u, *q),
            [a, b] => self.apply_2q(&u, *a, *b),
            _ => return Err(Error::usage(format!("{kind} on {qubits:?}"))),
        }
        Ok(())
    }

    /// Full-register probabilities with values at or below the floor set to zero.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps
            .iter()
            .map(|a| {
                let p = a.norm_sqr();
                if p <= PROBABILITY_FLOOR {
                    0.0
                } else {
                    p
                }
            })
            .collect()
    }
}

pub fn bit_label(index: usize, n: usize) -> String {
    (0..n)
        .map(|q| {
            if index >> (n - 1 - q) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub fn parse_bits(label: &str, n: usize) -> Result<usize> {
    if label.len() != n {
        return Err(Error::usage(format!(
            "bit string `{label}` should have {n} bits"
        )));
    }
    label.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok(acc << 1 | 1),
        _ => Err(Error::usage(format!(
            "bit string `{label}` has non-binary characters"
        ))),
    })
}

/// Runs `circuit` on `initial`, optionally injecting one fault. Barriers and
/// measurement are no-ops here.
pub fn apply_circuit(
    circuit: &Circuit,
    initial: &StateVector,
    fault: Option<&PauliFault>,
) -> Result<StateVector> {
    let faults = match fault {
        Some(f) => std::slice::from_ref(f),
        None => &[],
    };
    apply_circuit_with_faults(circuit, initial, faults)
}

/// Runs `circuit` with any number of injected faults. Measurement flips
/// are applied as X before readout, which has the same outcome statistics.
pub fn apply_circuit_with_faults(
    circuit: &Circuit,
    initial: &StateVector,
    faults: &[PauliFault],
) -> Result<StateVector> {
    if initial.n_qubits != circuit.n_qubits() {
        return Err(Error::Dimension {
            expected: circuit.n_qubits(),
            got: initial.n_qubits,
        });
    }
    let n_ops = circuit.ops().len();
    let mut by_slot: Vec<Vec<(usize, Pauli)>> = vec![Vec::new(); n_ops + 2];
    for f in faults {
        by_slot[f.slot(n_ops)].extend(f.actions(circuit)?);
    }
    let mut state = initial.clone();
    let inject = |state: &mut StateVector, slot: usize| {
        for &(q, p) in &by_slot[slot] {
            state.apply_pauli(p, q);
        }
    };
    inject(&mut state, 0);
    for (i, op) in circuit.ops().iter().enumerate() {
        if op.kind.is_unitary() {
            state.apply_gate(op.kind, &op.qubits)?;
        }
        inject(&mut state, i + 1);
    }
    inject(&mut state, n_ops + 1);
    Ok(state)
}

/// Exact marginal over `qubits` (in the given order). Entries at or below
/// the probability floor are omitted.
pub fn outcome_distribution(
    state: &StateVector,
    qubits: &[usize],
) -> Result<BTreeMap<String, f64>> {
    if qubits.is_empty() {
        return Err(Error::usage(
            "outcome distribution needs at least one qubit",
        ));
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q >= state.n_qubits || qubits[..i].contains(&q) {
            return Err(Error::usage(format!("bad qubit list {qubits:?}")));
        }
    }
    let n = state.n_qubits;
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    for (index, a) in state.amps.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let label: String = qubits
            .iter()
            .map(|&q| {
                if index >> (n - 1 - q) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        *out.entry(label).or_default() += p;
    }
    out.retain(|_, p| *p > PROBABILITY_FLOOR);
    Ok(out)
}
