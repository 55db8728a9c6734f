use std::fmt;

use serde::{Deserialize, Serialize};

use super::gate::GateKind;
use crate::error::{Error, Result};

/// Dense simulation is capped here; the largest circuit in the catalog has five.
pub const MAX_QUBITS: usize = 6;

/// Which party and phase an operation belongs to. Barriers delimit segments,
/// and nothing in this crate ever merges operations across them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Segment {
    Prep,
    Logic,
    Oracle,
    Readout,
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Segment::Prep => "prep",
            Segment::Logic => "logic",
            Segment::Oracle => "oracle",
            Segment::Readout => "readout",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub segment: Segment,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: &[usize], segment: Segment) -> Self {
        GateOp {
            kind,
            qubits: qubits.to_vec(),
            segment,
        }
    }
}

/// An ordered gate list over `n_qubits` wires, 0-indexed, where qubit 0 is
/// the most significant bit of every basis label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub name: String,
    n_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::usage(format!(
                "circuits need between 1 and {MAX_QUBITS} qubits, got {n_qubits}"
            )));
        }
        Ok(Circuit {
            name: name.into(),
            n_qubits,
            ops: Vec::new(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn measures(&self) -> bool {
        matches!(self.ops.last(), Some(op) if op.kind == GateKind::MeasureAll)
    }

    /// Appends an operation after checking arity, range and measurement placement.
    pub fn push(&mut self, op: GateOp) -> Result<()> {
        if self.measures() {
            return Err(Error::usage("MeasureAll must be the final operation"));
        }
        let arity = op.kind.arity();
        if op.qubits.len() != arity {
            return Err(Error::usage(format!(
                "{} acts on {arity} qubit(s), got {:?}",
                op.kind, op.qubits
            )));
        }
        for (i, &q) in op.qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(Error::usage(format!(
                    "qubit {q} out of range for {}-qubit circuit",
                    self.n_qubits
                )));
            }
            if op.qubits[..i].contains(&q) {
                return Err(Error::usage(format!("{} repeats qubit {q}", op.kind)));
            }
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn gate(&mut self, kind: GateKind, qubits: &[usize], segment: Segment) -> Result<()> {
        self.push(GateOp::new(kind, qubits, segment))
    }

    pub fn barrier(&mut self, segment: Segment) -> Result<()> {
        self.push(GateOp::new(GateKind::Barrier, &[], segment))
    }

    pub fn measure_all(&mut self) -> Result<()> {
        self.push(GateOp::new(GateKind::MeasureAll, &[], Segment::Readout))
    }

    /// Operations that are actual gates (no barriers, no measurement).
    pub fn gates(&self) -> impl Iterator<Item = (usize, &GateOp)> {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, op)| op.kind.is_unitary())
    }

    pub fn gate_count(&self) -> usize {
        self.gates().count()
    }

    /// Copy of the circuit with any trailing measurement removed.
    pub fn without_measurement(&self) -> Circuit {
        let mut c = self.clone();
        if c.measures() {
            c.ops.pop();
        }
        c
    }

    /// Sub-circuit holding only the gates tagged with `segment`.
    pub fn segment_ops(&self, segment: Segment) -> Vec<&GateOp> {
        self.gates()
            .map(|(_, op)| op)
            .filter(|op| op.segment == segment)
            .collect()
    }
}
