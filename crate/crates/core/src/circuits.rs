//! Every concrete circuit: bare and encoded Deutsch-Jozsa for the four
//! oracles, their trapped-ion native forms, and the eight entangled-state
//! preparations, each paired with the rule that turns bit strings into
//! answers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::code::{self, Physical, N};
use crate::error::{Error, Result};
use crate::sim::{
    apply_circuit, bit_label, outcome_distribution, Circuit, GateKind, Segment, StateVector, Turns,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OracleId {
    /// f(x) = 0
    F0,
    /// f(x) = x
    Fx,
    /// f(x) = 1 ⊕ x
    F1x,
    /// f(x) = 1
    F1,
}

impl OracleId {
    pub const ALL: [OracleId; 4] = [OracleId::F0, OracleId::Fx, OracleId::F1x, OracleId::F1];

    pub fn as_str(self) -> &'static str {
        match self {
            OracleId::F0 => "f0",
            OracleId::Fx => "fx",
            OracleId::F1x => "f1x",
            OracleId::F1 => "f1",
        }
    }

    pub fn is_constant(self) -> bool {
        matches!(self, OracleId::F0 | OracleId::F1)
    }

    /// The bit an ideal run reports: 1 for constant, 0 for balanced.
    pub fn ideal_answer(self) -> u8 {
        self.is_constant() as u8
    }

    /// Transversal words of the encoded oracle.
    pub fn encoded_words(self) -> Physical {
        Physical::Transversal(match self {
            OracleId::F0 => ["I", "I", "I", "I"],
            OracleId::Fx => ["S", "ZS", "ZS", "S"],
            OracleId::F1x => ["ZS", "S", "ZS", "S"],
            OracleId::F1 => ["Z", "Z", "I", "I"],
        })
    }

    /// Native oracle as (first, second) GPI phases per physical qubit.
    pub fn native_phases(self) -> [Option<(Turns, Turns)>; N] {
        let t = Turns::new;
        let a = Some((Turns::ZERO, t(1, 8)));
        let b = Some((Turns::ZERO, t(3, 8)));
        let f1 = Some((t(1, 2), t(1, 4)));
        match self {
            OracleId::F0 => [None; N],
            OracleId::Fx => [a, b, b, a],
            OracleId::F1x => [b, a, b, a],
            OracleId::F1 => [f1, f1, None, None],
        }
    }
}

impl fmt::Display for OracleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OracleId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OracleId::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| Error::UnknownCircuit(format!("oracle {s}")))
    }
}

/// A logical operation in an entangled-state word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogicalOp {
    X(usize),
    Z(usize),
    /// H on both logical qubits.
    Hh,
    Cz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EntangledId {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl EntangledId {
    pub const ALL: [EntangledId; 8] = [
        EntangledId::A,
        EntangledId::B,
        EntangledId::C,
        EntangledId::D,
        EntangledId::E,
        EntangledId::F,
        EntangledId::G,
        EntangledId::H,
    ];

    pub fn as_str(self) -> &'static str {
        ["A", "B", "C", "D", "E", "F", "G", "H"][self as usize]
    }

    /// Whether the word starts from the Bell state rather than |00⟩.
    pub fn starts_from_bell(self) -> bool {
        (self as usize) < 4
    }

    /// Gates in time order on logical qubits 0 and 1.
    pub fn word(self) -> Vec<LogicalOp> {
        use LogicalOp::*;
        match self {
            EntangledId::A => vec![],
            EntangledId::B => vec![Z(0)],
            EntangledId::C => vec![X(1)],
            EntangledId::D => vec![X(0), Z(0)],
            EntangledId::E => vec![Hh, Cz],
            EntangledId::F => vec![Hh, Z(1), Cz],
            EntangledId::G => vec![Hh, Z(0), Cz],
            EntangledId::H => vec![X(1), Hh, Cz, X(1)],
        }
    }

    /// Target two-qubit state as (label, real amplitude) pairs.
    pub fn final_kets(self) -> Vec<(&'static str, f64)> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let q = |s: [f64; 4]| {
            ["00", "01", "10", "11"]
                .into_iter()
                .zip(s.map(|x| x * 0.5))
                .collect::<Vec<_>>()
        };
        match self {
            EntangledId::A => vec![("00", r), ("11", r)],
            EntangledId::B => vec![("00", r), ("11", -r)],
            EntangledId::C => vec![("10", r), ("01", r)],
            EntangledId::D => vec![("10", r), ("01", -r)],
            EntangledId::E => q([1.0, 1.0, 1.0, -1.0]),
            EntangledId::F => q([1.0, -1.0, 1.0, 1.0]),
            EntangledId::G => q([1.0, 1.0, -1.0, 1.0]),
            EntangledId::H => q([1.0, -1.0, -1.0, -1.0]),
        }
    }
}

impl fmt::Display for EntangledId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntangledId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        EntangledId::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::UnknownCircuit(format!("entangled circuit {s}")))
    }
}

/// Which logical bits an encoded readout reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Keep {
    /// The answer bit only (ZZII eigenvalue).
    First,
    Both,
}

/// Turns a measured bit string into an answer label, or rejects it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Decoder {
    /// Marginal over the listed qubits; nothing is rejected.
    Bare { qubits: Vec<usize> },
    /// A code block read through `wires` (physical index of each block
    /// position), with every flag qubit required to read 0.
    Encoded {
        wires: [usize; N],
        flags: Vec<usize>,
        keep: Keep,
    },
}

impl Decoder {
    /// Answer labels in order.
    pub fn labels(&self) -> Vec<String> {
        let width = match self {
            Decoder::Bare { qubits } => qubits.len(),
            Decoder::Encoded {
                keep: Keep::First, ..
            } => 1,
            Decoder::Encoded {
                keep: Keep::Both, ..
            } => 2,
        };
        (0..1usize << width).map(|i| bit_label(i, width)).collect()
    }

    /// `None` when post-selection rejects the outcome.
    pub fn decode(&self, bits: &str) -> Result<Option<String>> {
        let b = bits.as_bytes();
        let bit = |q: usize| -> Result<u8> {
            b.get(q)
                .copied()
                .ok_or_else(|| Error::usage(format!("outcome `{bits}` too short")))
        };
        match self {
            Decoder::Bare { qubits } => Ok(Some(
                qubits
                    .iter()
                    .map(|&q| bit(q).map(char::from))
                    .collect::<Result<String>>()?,
            )),
            Decoder::Encoded { wires, flags, keep } => {
                for &f in flags {
                    if bit(f)? != b'0' {
                        return Ok(None);
                    }
                }
                let data = wires
                    .iter()
                    .map(|&q| bit(q).map(char::from))
                    .collect::<Result<String>>()?;
                if !code::accept(&data)? {
                    return Ok(None);
                }
                let out = code::decode(&data)?;
                Ok(Some(match keep {
                    Keep::First => out.first.to_string(),
                    Keep::Both => out.label(),
                }))
            }
        }
    }

    pub fn is_encoded(&self) -> bool {
        matches!(self, Decoder::Encoded { .. })
    }
}

/// Answer distribution after post-selection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decoded {
    pub accept_probability: f64,
    /// Conditional on acceptance; empty when nothing is accepted.
    pub distribution: BTreeMap<String, f64>,
}

/// A circuit together with its decoder.
#[derive(Clone, Debug)]
pub struct Program {
    pub circuit: Circuit,
    pub decoder: Decoder,
}

impl Program {
    /// Pushes an exact full-register distribution through the decoder.
    pub fn decode_distribution(&self, full: &BTreeMap<String, f64>) -> Result<Decoded> {
        let mut accepted = 0.0;
        let mut dist: BTreeMap<String, f64> = self
            .decoder
            .labels()
            .into_iter()
            .map(|l| (l, 0.0))
            .collect();
        for (bits, p) in full {
            if let Some(label) = self.decoder.decode(bits)? {
                accepted += p;
                *dist.entry(label).or_default() += p;
            }
        }
        if accepted <= crate::sim::PROBABILITY_FLOOR {
            return Ok(Decoded {
                accept_probability: 0.0,
                distribution: BTreeMap::new(),
            });
        }
        for p in dist.values_mut() {
            *p /= accepted;
        }
        Ok(Decoded {
            accept_probability: accepted,
            distribution: dist,
        })
    }

    /// Exact full-register distribution of a final state.
    pub fn register_distribution(&self, state: &StateVector) -> Result<BTreeMap<String, f64>> {
        let all: Vec<usize> = (0..self.circuit.n_qubits()).collect();
        outcome_distribution(state, &all)
    }

    pub fn ideal(&self) -> Result<Decoded> {
        let zero = StateVector::zero(self.circuit.n_qubits())?;
        let state = apply_circuit(&self.circuit, &zero, None)?;
        self.decode_distribution(&self.register_distribution(&state)?)
    }
}

fn turns(n: i64, d: i64) -> Turns {
    Turns::new(n, d)
}

/// Two-qubit Deutsch-Jozsa: X and H on both qubits, the oracle between
/// barriers, H on qubit 2, measure. The answer is read from qubit 2.
pub fn bare_dj(oracle: OracleId) -> Result<Circuit> {
    let mut c = Circuit::new(format!("bare-dj:{oracle}"), 2)?;
    for q in 0..2 {
        c.gate(GateKind::X, &[q], Segment::Prep)?;
        c.gate(GateKind::H, &[q], Segment::Prep)?;
    }
    c.barrier(Segment::Prep)?;
    let o = Segment::Oracle;
    match oracle {
        OracleId::F0 => {}
        OracleId::Fx => c.gate(GateKind::Cnot, &[1, 0], o)?,
        OracleId::F1x => {
            c.gate(GateKind::X, &[0], o)?;
            c.gate(GateKind::Cnot, &[1, 0], o)?;
        }
        OracleId::F1 => c.gate(GateKind::X, &[0], o)?,
    }
    c.barrier(o)?;
    c.gate(GateKind::H, &[1], Segment::Readout)?;
    c.measure_all()?;
    Ok(c)
}

fn push_ops(c: &mut Circuit, ops: Vec<crate::sim::GateOp>) -> Result<()> {
    ops.into_iter().try_for_each(|op| c.push(op))
}

/// Bell pairs on (1,2) and (3,4): H on qubits 2 and 4, then CNOTs onto 1 and 3.
fn bell_pairs(c: &mut Circuit) -> Result<()> {
    let p = Segment::Prep;
    c.gate(GateKind::H, &[1], p)?;
    c.gate(GateKind::H, &[3], p)?;
    c.gate(GateKind::Cnot, &[1, 0], p)?;
    c.gate(GateKind::Cnot, &[3, 2], p)
}

/// Four-qubit encoded Deutsch-Jozsa with the transversal oracle.
pub fn encoded_dj(oracle: OracleId) -> Result<Circuit> {
    let mut c = Circuit::new(format!("encoded-dj:{oracle}"), N)?;
    bell_pairs(&mut c)?;
    c.gate(GateKind::Y, &[1], Segment::Prep)?;
    c.gate(GateKind::Y, &[3], Segment::Prep)?;
    c.barrier(Segment::Prep)?;
    push_ops(
        &mut c,
        oracle.encoded_words().ops(&[0, 1, 2, 3], Segment::Oracle)?,
    )?;
    c.barrier(Segment::Oracle)?;
    for q in 0..N {
        c.gate(GateKind::H, &[q], Segment::Readout)?;
    }
    c.measure_all()?;
    Ok(c)
}

/// The oracle alone, in native gates, on four qubits.
pub fn native_oracle(oracle: OracleId) -> Result<Circuit> {
    let mut c = Circuit::new(format!("native-oracle:{oracle}"), N)?;
    push_native_oracle(&mut c, oracle)?;
    Ok(c)
}

fn push_native_oracle(c: &mut Circuit, oracle: OracleId) -> Result<()> {
    for (q, phases) in oracle.native_phases().into_iter().enumerate() {
        if let Some((a, b)) = phases {
            c.gate(GateKind::Gpi(a), &[q], Segment::Oracle)?;
            c.gate(GateKind::Gpi(b), &[q], Segment::Oracle)?;
        }
    }
    Ok(())
}

/// Encoded Deutsch-Jozsa in GPI/GPI2/MS gates.
pub fn native_encoded_dj(oracle: OracleId) -> Result<Circuit> {
    let mut c = Circuit::new(format!("encoded-dj-native:{oracle}"), N)?;
    let p = Segment::Prep;
    c.gate(GateKind::Gpi(Turns::ZERO), &[1], p)?;
    c.gate(GateKind::Gpi(Turns::ZERO), &[3], p)?;
    c.gate(GateKind::Ms, &[0, 1], p)?;
    c.gate(GateKind::Ms, &[2, 3], p)?;
    for q in 0..N {
        c.gate(GateKind::Gpi2(turns(1, 2)), &[q], p)?;
    }
    c.gate(GateKind::Gpi2(turns(1, 4)), &[1], p)?;
    c.gate(GateKind::Gpi2(turns(1, 4)), &[3], p)?;
    c.barrier(p)?;
    push_native_oracle(&mut c, oracle)?;
    c.barrier(Segment::Oracle)?;
    for q in 0..N {
        c.gate(GateKind::Gpi2(turns(1, 4)), &[q], Segment::Readout)?;
        c.gate(GateKind::Gpi(Turns::ZERO), &[q], Segment::Readout)?;
    }
    c.measure_all()?;
    Ok(c)
}

fn dj_decoder() -> Decoder {
    Decoder::Encoded {
        wires: [0, 1, 2, 3],
        flags: Vec::new(),
        keep: Keep::First,
    }
}

/// Two-qubit circuit for an entangled state: Bell preparation (H, CNOT)
/// for A–D, then the word.
pub fn bare_entangled(id: EntangledId) -> Result<Circuit> {
    let mut c = Circuit::new(format!("entangled:{id}:bare"), 2)?;
    if id.starts_from_bell() {
        c.gate(GateKind::H, &[0], Segment::Prep)?;
        c.gate(GateKind::Cnot, &[0, 1], Segment::Prep)?;
        c.barrier(Segment::Prep)?;
    }
    for op in id.word() {
        let l = Segment::Logic;
        match op {
            LogicalOp::X(q) => c.gate(GateKind::X, &[q], l)?,
            LogicalOp::Z(q) => c.gate(GateKind::Z, &[q], l)?,
            LogicalOp::Hh => {
                c.gate(GateKind::H, &[0], l)?;
                c.gate(GateKind::H, &[1], l)?;
            }
            LogicalOp::Cz => c.gate(GateKind::Cz, &[0, 1], l)?,
        }
    }
    c.measure_all()?;
    Ok(c)
}

/// Qubit index of the flag used by the |00⟩ preparation.
pub const FLAG: usize = 4;

/// Logical |00⟩ of the conventional dictionary, (|0000⟩+|1111⟩)/√2, built
/// as a CNOT chain with a flag qubit checking Z1Z4; a flag reading 1 means
/// a weight-two X error slipped through the chain.
fn flagged_ghz(c: &mut Circuit) -> Result<()> {
    let p = Segment::Prep;
    c.gate(GateKind::H, &[0], p)?;
    c.gate(GateKind::Cnot, &[0, 1], p)?;
    c.gate(GateKind::Cnot, &[1, 2], p)?;
    c.gate(GateKind::Cnot, &[2, 3], p)?;
    c.gate(GateKind::Cnot, &[0, FLAG], p)?;
    c.gate(GateKind::Cnot, &[3, FLAG], p)
}

/// Encoded entangled state in the conventional dictionary. Relabels only
/// move the wire map; decoding reads the block through the final map.
pub fn encoded_entangled(id: EntangledId) -> Result<(Circuit, Decoder)> {
    use code::DictionaryName::Conventional;
    let dict = code::LogicalDictionary::new(Conventional);
    let bell = id.starts_from_bell();
    let n = if bell { N } else { N + 1 };
    let mut c = Circuit::new(format!("entangled:{id}:encoded"), n)?;
    let mut wires = [0, 1, 2, 3];
    let relabel = |wires: &mut [usize; N], label: &str| -> Result<()> {
        if let Physical::Relabel(a, b) = dict.get(label)?.physical {
            wires.swap(a, b);
        }
        Ok(())
    };
    if bell {
        bell_pairs(&mut c)?;
        relabel(&mut wires, "CNOT21")?;
    } else {
        flagged_ghz(&mut c)?;
    }
    c.barrier(Segment::Prep)?;
    for op in id.word() {
        let label = match op {
            LogicalOp::X(0) => "XI",
            LogicalOp::X(_) => "IX",
            LogicalOp::Z(0) => "ZI",
            LogicalOp::Z(_) => "IZ",
            LogicalOp::Hh => "SWAP12*HH",
            LogicalOp::Cz => "CZ",
        };
        push_ops(
            &mut c,
            dict.get(label)?.physical.ops(&wires, Segment::Logic)?,
        )?;
        if op == LogicalOp::Hh {
            relabel(&mut wires, "SWAP12")?;
        }
    }
    c.measure_all()?;
    let flags = if bell { Vec::new() } else { vec![FLAG] };
    Ok((
        c,
        Decoder::Encoded {
            wires,
            flags,
            keep: Keep::Both,
        },
    ))
}

/// Names of every catalog circuit.
pub fn list() -> Vec<String> {
    let mut out = Vec::new();
    for kind in ["bare-dj", "encoded-dj", "encoded-dj-native"] {
        for o in OracleId::ALL {
            out.push(format!("{kind}:{o}"));
        }
    }
    for id in EntangledId::ALL {
        out.push(format!("entangled:{id}:bare"));
        out.push(format!("entangled:{id}:encoded"));
    }
    out
}

/// Looks up a catalog circuit by name, e.g. `encoded-dj:fx` or
/// `entangled:E:encoded`.
pub fn program(name: &str) -> Result<Program> {
    let unknown = || Error::UnknownCircuit(name.to_string());
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        [kind, o] => {
            let oracle: OracleId = o.parse().map_err(|_| unknown())?;
            match *kind {
                "bare-dj" => Ok(Program {
                    circuit: bare_dj(oracle)?,
                    decoder: Decoder::Bare { qubits: vec![1] },
                }),
                "encoded-dj" => Ok(Program {
                    circuit: encoded_dj(oracle)?,
                    decoder: dj_decoder(),
                }),
                "encoded-dj-native" => Ok(Program {
                    circuit: native_encoded_dj(oracle)?,
                    decoder: dj_decoder(),
                }),
                _ => Err(unknown()),
            }
        }
        ["entangled", id, form] => {
            let id: EntangledId = id.parse().map_err(|_| unknown())?;
            match *form {
                "bare" => Ok(Program {
                    circuit: bare_entangled(id)?,
                    decoder: Decoder::Bare { qubits: vec![0, 1] },
                }),
                "encoded" => {
                    let (circuit, decoder) = encoded_entangled(id)?;
                    Ok(Program { circuit, decoder })
                }
                _ => Err(unknown()),
            }
        }
        _ => Err(unknown()),
    }
}

/// Bare and encoded programs for one oracle, the encoded one in Clifford or
/// native form.
pub fn dj_pair(oracle: OracleId, native: bool) -> Result<(Program, Program)> {
    let enc = if native {
        "encoded-dj-native"
    } else {
        "encoded-dj"
    };
    Ok((
        program(&format!("bare-dj:{oracle}"))?,
        program(&format!("{enc}:{oracle}"))?,
    ))
}
