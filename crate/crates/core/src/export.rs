//! Circuit serialisation: a JSON schema that round-trips exactly, and a
//! one-op-per-line text listing for diffing.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{Circuit, GateKind, GateOp, Segment, Turns};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpJson {
    pub kind: String,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_turns: Option<Turns>,
    pub segment: Segment,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitJson {
    pub name: String,
    pub n_qubits: usize,
    pub ops: Vec<OpJson>,
}

impl From<&Circuit> for CircuitJson {
    fn from(c: &Circuit) -> Self {
        CircuitJson {
            name: c.name.clone(),
            n_qubits: c.n_qubits(),
            ops: c
                .ops()
                .iter()
                .map(|op| OpJson {
                    kind: op.kind.name().to_string(),
                    qubits: op.qubits.clone(),
                    param_turns: op.kind.turns(),
                    segment: op.segment,
                })
                .collect(),
        }
    }
}

impl TryFrom<CircuitJson> for Circuit {
    type Error = Error;
    fn try_from(j: CircuitJson) -> Result<Circuit> {
        let mut c = Circuit::new(j.name, j.n_qubits)?;
        for op in j.ops {
            let kind = GateKind::from_name(&op.kind, op.param_turns)?;
            c.push(GateOp::new(kind, &op.qubits, op.segment))
                .map_err(|e| Error::Json(e.to_string()))?;
        }
        Ok(c)
    }
}

/// Pretty-printed JSON. Qubit indices are 0-based.
pub fn to_json(c: &Circuit) -> String {
    serde_json::to_string_pretty(&CircuitJson::from(c)).expect("plain data serialises")
}

/// Parses and validates a circuit document.
pub fn from_json(s: &str) -> Result<Circuit> {
    let j: CircuitJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
    j.try_into()
}

/// Human-readable listing, qubits numbered from 1.
pub fn to_text(c: &Circuit) -> String {
    let mut s = format!("# {} ({} qubits)\n", c.name, c.n_qubits());
    for op in c.ops() {
        let qubits: Vec<String> = op.qubits.iter().map(|q| format!("q{}", q + 1)).collect();
        let line = match op.kind {
            GateKind::Barrier => format!("barrier [{}]", op.segment),
            GateKind::MeasureAll => "measure all".to_string(),
            kind => format!("{kind} {} [{}]", qubits.join(","), op.segment),
        };
        let _ = writeln!(s, "{line}");
    }
    s
}
