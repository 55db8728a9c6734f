//! Circuit-level depolarizing noise: where faults can occur, how they are
//! sampled for Monte-Carlo runs, and the exhaustive single-fault list used by
//! the fault-tolerance checker.
//!
//! A fault attaches *after* its gate. Measurement faults are classical bit
//! flips applied after ideal sampling; preparation faults are X flips on the
//! initial |0⟩.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{Circuit, GateKind, Pauli};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Fault probability after each single-qubit gate (and idle step).
    pub p1: f64,
    /// Fault probability after each two-qubit gate.
    pub p2: f64,
    /// Bit-flip probability per measured qubit.
    pub p_meas: f64,
    /// Flip probability per qubit at preparation.
    pub p_prep: f64,
    pub include_idle: bool,
}

impl NoiseModel {
    /// Error rates read off the device calibration (1Q 99.05 %, 2Q 98.75 %,
    /// readout 99.32 %) as `p = 1 − fidelity`.
    pub const CALIBRATED: NoiseModel = NoiseModel {
        p1: 0.0095,
        p2: 0.0125,
        p_meas: 0.0068,
        p_prep: 0.0,
        include_idle: false,
    };

    pub const NOISELESS: NoiseModel = NoiseModel {
        p1: 0.0,
        p2: 0.0,
        p_meas: 0.0,
        p_prep: 0.0,
        include_idle: false,
    };

    pub fn new(p1: f64, p2: f64, p_meas: f64) -> Result<Self> {
        let m = NoiseModel {
            p1,
            p2,
            p_meas,
            ..NoiseModel::NOISELESS
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("p1", self.p1),
            ("p2", self.p2),
            ("p_meas", self.p_meas),
            ("p_prep", self.p_prep),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidProbability { name, value });
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_meas == 0.0 && self.p_prep == 0.0
    }

    pub fn probability(&self, site: &Site) -> f64 {
        match site.location {
            FaultLocation::Prep { .. } => self.p_prep,
            FaultLocation::PreMeasure { .. } => self.p_meas,
            FaultLocation::Idle { .. } => self.p1,
            FaultLocation::Gate { .. } => {
                if site.qubits.len() == 2 {
                    self.p2
                } else {
                    self.p1
                }
            }
        }
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::CALIBRATED
    }
}

/// Where in the circuit a fault strikes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum FaultLocation {
    /// Flip of the freshly prepared |0⟩.
    Prep { qubit: usize },
    /// Immediately after the gate at this index of `Circuit::ops`.
    Gate { op: usize },
    /// A qubit waiting out a layer; the error is applied right after `after`
    /// (the qubit's previous gate) or at the start when `None`.
    Idle {
        qubit: usize,
        layer: usize,
        after: Option<usize>,
    },
    /// Classical flip of a measured bit.
    PreMeasure { qubit: usize },
}

/// What the fault does at its location.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultPauli {
    Single(Pauli),
    /// Paulis on the gate's first and second qubit, in that order.
    Pair(Pauli, Pauli),
    /// Bit flip (prep or measurement).
    Flip,
}

impl fmt::Display for FaultPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaultPauli::Single(p) => write!(f, "{p}"),
            FaultPauli::Pair(a, b) => write!(f, "{a}{b}"),
            FaultPauli::Flip => f.write_str("flip"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliFault {
    pub location: FaultLocation,
    pub pauli: FaultPauli,
}

impl PauliFault {
    pub fn after_gate(op: usize, pauli: FaultPauli) -> Self {
        PauliFault {
            location: FaultLocation::Gate { op },
            pauli,
        }
    }

    pub fn measurement_flip(qubit: usize) -> Self {
        PauliFault {
            location: FaultLocation::PreMeasure { qubit },
            pauli: FaultPauli::Flip,
        }
    }

    /// The (qubit, Pauli) actions this fault applies to the quantum state.
    /// Flips act as X.
    pub fn actions(&self, circuit: &Circuit) -> Result<Vec<(usize, Pauli)>> {
        let bad = |why: &str| Error::InvalidFault(format!("{self:?}: {why}"));
        let n = circuit.n_qubits();
        let actions = match (self.location, self.pauli) {
            (
                FaultLocation::Prep { qubit } | FaultLocation::PreMeasure { qubit },
                FaultPauli::Flip,
            ) => {
                if qubit >= n {
                    return Err(bad("qubit out of range"));
                }
                vec![(qubit, Pauli::X)]
            }
            (FaultLocation::Idle { qubit, after, .. }, FaultPauli::Single(p)) => {
                if qubit >= n {
                    return Err(bad("qubit out of range"));
                }
                if let Some(i) = after {
                    if i >= circuit.ops().len() {
                        return Err(bad("anchor past end of circuit"));
                    }
                }
                vec![(qubit, p)]
            }
            (FaultLocation::Gate { op }, pauli) => {
                let gate = circuit.ops().get(op).ok_or_else(|| bad("no such op"))?;
                if !gate.kind.is_unitary() {
                    return Err(bad("barriers and measurement carry no gate faults"));
                }
                match (pauli, gate.qubits.as_slice()) {
                    (FaultPauli::Single(p), [q]) => vec![(*q, p)],
                    (FaultPauli::Pair(a, b), [qa, qb]) => vec![(*qa, a), (*qb, b)],
                    _ => return Err(bad("Pauli support does not match the gate")),
                }
            }
            _ => return Err(bad("Pauli kind does not match location")),
        };
        Ok(actions)
    }

    /// Slot in the op sequence after which the fault is applied: 0 is before
    /// the first op, `i + 1` is after op `i`, `ops.len() + 1` is after everything.
    pub(crate) fn slot(&self, n_ops: usize) -> usize {
        match self.location {
            FaultLocation::Prep { .. } => 0,
            FaultLocation::Idle { after, .. } => after.map_or(0, |i| i + 1),
            FaultLocation::Gate { op } => op + 1,
            FaultLocation::PreMeasure { .. } => n_ops + 1,
        }
    }
}

impl fmt::Display for PauliFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            FaultLocation::Prep { qubit } => write!(f, "prep q{} {}", qubit + 1, self.pauli),
            FaultLocation::Gate { op } => write!(f, "op#{op} {}", self.pauli),
            FaultLocation::Idle { qubit, layer, .. } => {
                write!(f, "idle q{} layer {layer} {}", qubit + 1, self.pauli)
            }
            FaultLocation::PreMeasure { qubit } => write!(f, "meas q{} {}", qubit + 1, self.pauli),
        }
    }
}

/// A fault location together with the qubits it touches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Site {
    pub location: FaultLocation,
    pub qubits: Vec<usize>,
}

impl Site {
    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    /// Every non-trivial fault at this site, in Pauli lexicographic order.
    pub fn faults(&self) -> Vec<PauliFault> {
        let location = self.location;
        let with = |pauli| PauliFault { location, pauli };
        match (location, self.qubits.len()) {
            (FaultLocation::Prep { .. } | FaultLocation::PreMeasure { .. }, _) => {
                vec![with(FaultPauli::Flip)]
            }
            (_, 2) => two_qubit_paulis().into_iter().map(with).collect(),
            _ => Pauli::NON_IDENTITY
                .into_iter()
                .map(|p| with(FaultPauli::Single(p)))
                .collect(),
        }
    }

    fn pick(&self, u: f64) -> FaultPauli {
        let pick = |n: usize| ((u * n as f64) as usize).min(n - 1);
        match (self.location, self.qubits.len()) {
            (FaultLocation::Prep { .. } | FaultLocation::PreMeasure { .. }, _) => FaultPauli::Flip,
            (_, 2) => two_qubit_paulis()[pick(15)],
            _ => FaultPauli::Single(Pauli::NON_IDENTITY[pick(3)]),
        }
    }
}

/// The 15 non-identity two-qubit Paulis, lexicographic with I < X < Y < Z.
pub fn two_qubit_paulis() -> Vec<FaultPauli> {
    let mut out = Vec::with_capacity(15);
    for a in Pauli::ALL {
        for b in Pauli::ALL {
            if (a, b) != (Pauli::I, Pauli::I) {
                out.push(FaultPauli::Pair(a, b));
            }
        }
    }
    out
}

fn sort_key(site: &Site) -> (usize, usize, usize) {
    match site.location {
        FaultLocation::Prep { qubit } => (0, 0, qubit),
        FaultLocation::Idle {
            qubit,
            layer,
            after,
        } => (after.map_or(1, |i| 2 * i + 3), layer, qubit),
        FaultLocation::Gate { op } => (2 * op + 2, 0, 0),
        FaultLocation::PreMeasure { qubit } => (usize::MAX, 0, qubit),
    }
}

/// Idle sites from an as-soon-as-possible layering; barriers synchronise all
/// wires.
fn idle_sites(circuit: &Circuit) -> Vec<Site> {
    let n = circuit.n_qubits();
    let mut next_layer = vec![0usize; n];
    let mut last_op: Vec<Option<usize>> = vec![None; n];
    let mut sites = Vec::new();
    let emit = |q: usize, from: usize, to: usize, after: Option<usize>, sites: &mut Vec<Site>| {
        for layer in from..to {
            sites.push(Site {
                location: FaultLocation::Idle {
                    qubit: q,
                    layer,
                    after,
                },
                qubits: vec![q],
            });
        }
    };
    for (i, op) in circuit.ops().iter().enumerate() {
        match op.kind {
            GateKind::MeasureAll => break,
            GateKind::Barrier => {
                let top = next_layer.iter().copied().max().unwrap_or(0);
                for q in 0..n {
                    emit(q, next_layer[q], top, last_op[q], &mut sites);
                    next_layer[q] = top;
                }
            }
            _ => {
                let layer = op.qubits.iter().map(|&q| next_layer[q]).max().unwrap_or(0);
                for &q in &op.qubits {
                    emit(q, next_layer[q], layer, last_op[q], &mut sites);
                    next_layer[q] = layer + 1;
                    last_op[q] = Some(i);
                }
            }
        }
    }
    let top = next_layer.iter().copied().max().unwrap_or(0);
    for q in 0..n {
        emit(q, next_layer[q], top, last_op[q], &mut sites);
    }
    sites
}

/// All places a fault may strike under `model`: one per gate, one per
/// measured qubit, plus preparation sites when `p_prep > 0` and idle sites
/// when enabled.
pub fn fault_locations(circuit: &Circuit, model: &NoiseModel) -> Vec<Site> {
    sites(circuit, model.p_prep > 0.0, model.include_idle)
}

pub fn sites(circuit: &Circuit, include_prep: bool, include_idle: bool) -> Vec<Site> {
    let mut out = Vec::new();
    if include_prep {
        out.extend((0..circuit.n_qubits()).map(|qubit| Site {
            location: FaultLocation::Prep { qubit },
            qubits: vec![qubit],
        }));
    }
    out.extend(circuit.gates().map(|(op, g)| Site {
        location: FaultLocation::Gate { op },
        qubits: g.qubits.clone(),
    }));
    if include_idle {
        out.extend(idle_sites(circuit));
    }
    if circuit.measures() {
        out.extend((0..circuit.n_qubits()).map(|qubit| Site {
            location: FaultLocation::PreMeasure { qubit },
            qubits: vec![qubit],
        }));
    }
    out.sort_by_key(sort_key);
    out
}

/// Every single fault at the default locations (gates and measurements).
pub fn enumerate_single_faults(circuit: &Circuit) -> Vec<PauliFault> {
    enumerate_faults(&sites(circuit, false, false))
}

pub fn enumerate_faults(sites: &[Site]) -> Vec<PauliFault> {
    sites.iter().flat_map(Site::faults).collect()
}

/// Pre-resolved sites and probabilities for repeated sampling.
#[derive(Clone, Debug)]
pub struct FaultSampler {
    sites: Vec<(Site, f64)>,
}

impl FaultSampler {
    pub fn new(circuit: &Circuit, model: &NoiseModel) -> Self {
        let sites = fault_locations(circuit, model)
            .into_iter()
            .map(|s| {
                let p = model.probability(&s);
                (s, p)
            })
            .filter(|(_, p)| *p > 0.0)
            .collect();
        FaultSampler { sites }
    }

    pub fn expected_faults(&self) -> f64 {
        self.sites.iter().map(|(_, p)| p).sum()
    }

    /// Draws an independent fault set. Exactly two uniforms are consumed per
    /// site whether or not it faults, so streams stay aligned across noise
    /// strengths.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<PauliFault> {
        let mut faults = Vec::new();
        for (site, p) in &self.sites {
            let hit: f64 = rng.gen();
            let which: f64 = rng.gen();
            if hit < *p {
                faults.push(PauliFault {
                    location: site.location,
                    pauli: site.pick(which),
                });
            }
        }
        faults
    }
}

pub fn sample_fault_set<R: Rng + ?Sized>(
    circuit: &Circuit,
    model: &NoiseModel,
    rng: &mut R,
) -> Vec<PauliFault> {
    FaultSampler::new(circuit, model).sample(rng)
}
