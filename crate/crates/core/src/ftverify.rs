//! Exhaustive single-fault classification.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::circuits::{Decoded, Program};
use crate::error::{Error, Result};
use crate::noise::{enumerate_faults, fault_locations, sites, NoiseModel, PauliFault};
use crate::sim::{apply_circuit, StateVector, PROBABILITY_FLOOR};

/// Accepted distributions further apart than this count as wrong.
pub const LOGICAL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Classification {
    /// Every outcome is rejected.
    Detected,
    /// Something is accepted and it decodes exactly like the ideal run.
    Harmless,
    /// Some accepted outcome decodes differently from the ideal run.
    LogicalError,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Detected => "Detected",
            Classification::Harmless => "Harmless",
            Classification::LogicalError => "LogicalError",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FaultVerdict {
    pub fault: PauliFault,
    pub accept_probability: f64,
    /// Total variation between the accepted and the ideal answer
    /// distributions (0 when detected).
    pub deviation: f64,
    pub classification: Classification,
}

fn total_variation(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    keys.into_iter()
        .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
        .sum::<f64>()
        / 2.0
}

/// Injects `fault` into the program and compares the accepted answers with
/// `ideal`.
pub fn classify_fault(
    program: &Program,
    fault: &PauliFault,
    ideal: &Decoded,
) -> Result<FaultVerdict> {
    if !program.circuit.measures() {
        return Err(Error::usage(
            "fault classification needs a measured circuit",
        ));
    }
    let zero = StateVector::zero(program.circuit.n_qubits())?;
    let state = apply_circuit(&program.circuit, &zero, Some(fault))?;
    let got = program.decode_distribution(&program.register_distribution(&state)?)?;
    let (deviation, classification) = if got.accept_probability <= PROBABILITY_FLOOR {
        (0.0, Classification::Detected)
    } else {
        let d = total_variation(&got.distribution, &ideal.distribution);
        if d > LOGICAL_TOLERANCE {
            (d, Classification::LogicalError)
        } else {
            (d, Classification::Harmless)
        }
    };
    Ok(FaultVerdict {
        fault: *fault,
        accept_probability: got.accept_probability,
        deviation,
        classification,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FtReport {
    pub circuit: String,
    pub include_prep: bool,
    pub total: usize,
    pub detected: usize,
    pub harmless: usize,
    pub logical_errors: usize,
    pub fault_tolerant: bool,
    /// The logical error with the largest deviation, if any.
    pub worst: Option<FaultVerdict>,
    pub verdicts: Vec<FaultVerdict>,
}

impl FtReport {
    fn new(circuit: String, include_prep: bool, verdicts: Vec<FaultVerdict>) -> Self {
        let count = |c| verdicts.iter().filter(|v| v.classification == c).count();
        let logical_errors = count(Classification::LogicalError);
        let worst = verdicts
            .iter()
            .filter(|v| v.classification == Classification::LogicalError)
            .max_by(|a, b| a.deviation.total_cmp(&b.deviation))
            .cloned();
        FtReport {
            circuit,
            include_prep,
            total: verdicts.len(),
            detected: count(Classification::Detected),
            harmless: count(Classification::Harmless),
            logical_errors,
            fault_tolerant: logical_errors == 0,
            worst,
            verdicts,
        }
    }
}

/// Classifies every single fault at gates and measurements (and
/// preparation when `include_prep`). Fault tolerant iff no LogicalError.
pub fn verify_fault_tolerance(program: &Program, include_prep: bool) -> Result<FtReport> {
    let ideal = program.ideal()?;
    let faults = enumerate_faults(&sites(&program.circuit, include_prep, false));
    let verdicts = classify_all(program, &faults, &ideal)?;
    Ok(FtReport::new(
        program.circuit.name.clone(),
        include_prep,
        verdicts,
    ))
}

/// First-order (single-fault) estimates under a noise model: each site
/// contributes its probability times the share of its faults that are
/// rejected or that leave an accepted wrong answer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FirstOrder {
    pub rejection: f64,
    pub acceptance: f64,
    /// Probability mass of accepted, wrongly decoded answers.
    pub logical_error: f64,
    pub expected_faults: f64,
}

pub fn first_order_estimate(program: &Program, model: &NoiseModel) -> Result<FirstOrder> {
    model.validate()?;
    let ideal = program.ideal()?;
    let mut out = FirstOrder {
        rejection: 0.0,
        acceptance: 1.0,
        logical_error: 0.0,
        expected_faults: 0.0,
    };
    for site in fault_locations(&program.circuit, model) {
        let p = model.probability(&site);
        if p == 0.0 {
            continue;
        }
        let faults = site.faults();
        let share = p / faults.len() as f64;
        out.expected_faults += p;
        for f in &faults {
            let v = classify_fault(program, f, &ideal)?;
            out.rejection += share * (1.0 - v.accept_probability).max(0.0);
            out.logical_error += share * v.accept_probability * v.deviation;
        }
    }
    out.acceptance = 1.0 - out.rejection;
    Ok(out)
}

#[cfg(feature = "parallel")]
fn classify_all(
    program: &Program,
    faults: &[PauliFault],
    ideal: &Decoded,
) -> Result<Vec<FaultVerdict>> {
    use rayon::prelude::*;
    faults
        .par_iter()
        .map(|f| classify_fault(program, f, ideal))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn classify_all(
    program: &Program,
    faults: &[PauliFault],
    ideal: &Decoded,
) -> Result<Vec<FaultVerdict>> {
    faults
        .iter()
        .map(|f| classify_fault(program, f, ideal))
        .collect()
}
