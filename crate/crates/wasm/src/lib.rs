//! Browser bindings. Every export takes plain numbers and strings and
//! returns a JSON string; errors come back as a thrown string.

use dj422::circuits::{self, OracleId};
use dj422::experiment;
use dj422::ftverify::verify_fault_tolerance;
use dj422::noise::NoiseModel;
use dj422::sim::Parallelism;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(text)
}

pub fn catalog_json() -> Result<String, String> {
    to_json(&circuits::list())
}

pub fn run_json(
    circuit: &str,
    shots: u32,
    p1: f64,
    p2: f64,
    p_meas: f64,
    seed: u32,
) -> Result<String, String> {
    let p = circuits::program(circuit).map_err(text)?;
    let model = NoiseModel::new(p1, p2, p_meas).map_err(text)?;
    let r = experiment::run(&p, shots.into(), &model, seed.into(), Parallelism::Serial)
        .map_err(text)?;
    to_json(&r)
}

#[derive(Serialize)]
struct CurvePoint {
    scale: f64,
    d_bare: f64,
    sigma_bare: f64,
    d_enc: f64,
    sigma_enc: f64,
    post_selection_ratio: f64,
}

/// Calibrated error rates multiplied by `0, max/steps, …, max`.
pub fn noise_curve_json(
    oracle: &str,
    max_scale: f64,
    steps: u32,
    shots: u32,
    seed: u32,
) -> Result<String, String> {
    if !(max_scale.is_finite() && max_scale >= 0.0) || steps == 0 {
        return Err("need a non-negative scale and at least one step".into());
    }
    let o: OracleId = oracle.parse().map_err(text)?;
    let (bare, enc) = circuits::dj_pair(o, false).map_err(text)?;
    let base = NoiseModel::CALIBRATED;
    let mut points = Vec::new();
    for i in 0..=steps {
        let scale = max_scale * f64::from(i) / f64::from(steps);
        let model =
            NoiseModel::new(base.p1 * scale, base.p2 * scale, base.p_meas * scale).map_err(text)?;
        let row = experiment::compare_pair(
            o.as_str(),
            &bare,
            &enc,
            shots.into(),
            &model,
            seed.into(),
            Parallelism::Serial,
        )
        .map_err(text)?;
        points.push(CurvePoint {
            scale,
            d_bare: row.d_bare,
            sigma_bare: row.sigma_bare,
            d_enc: row.d_enc,
            sigma_enc: row.sigma_enc,
            post_selection_ratio: row.post_selection_ratio,
        });
    }
    to_json(&points)
}

#[derive(Serialize)]
struct Census {
    circuit: String,
    total: usize,
    detected: usize,
    harmless: usize,
    logical_errors: usize,
    verdicts: Vec<CensusRow>,
}

#[derive(Serialize)]
struct CensusRow {
    fault: String,
    accept_probability: f64,
    classification: String,
}

/// Single-fault census: counts per class plus every verdict.
pub fn fault_census_json(circuit: &str, include_prep: bool) -> Result<String, String> {
    let p = circuits::program(circuit).map_err(text)?;
    let r = verify_fault_tolerance(&p, include_prep).map_err(text)?;
    to_json(&Census {
        verdicts: r
            .verdicts
            .iter()
            .map(|v| CensusRow {
                fault: v.fault.to_string(),
                accept_probability: v.accept_probability,
                classification: v.classification.to_string(),
            })
            .collect(),
        circuit: r.circuit,
        total: r.total,
        detected: r.detected,
        harmless: r.harmless,
        logical_errors: r.logical_errors,
    })
}

#[wasm_bindgen]
pub fn catalog() -> Result<String, JsValue> {
    catalog_json().map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn run(
    circuit: &str,
    shots: u32,
    p1: f64,
    p2: f64,
    p_meas: f64,
    seed: u32,
) -> Result<String, JsValue> {
    run_json(circuit, shots, p1, p2, p_meas, seed).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn noise_curve(
    oracle: &str,
    max_scale: f64,
    steps: u32,
    shots: u32,
    seed: u32,
) -> Result<String, JsValue> {
    noise_curve_json(oracle, max_scale, steps, shots, seed).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn fault_census(circuit: &str, include_prep: bool) -> Result<String, JsValue> {
    fault_census_json(circuit, include_prep).map_err(JsValue::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_reports_counts() {
        let v: serde_json::Value = serde_json::from_str(
            &run_json("encoded-dj:fx", 500, 0.0095, 0.0125, 0.0068, 1).unwrap(),
        )
        .unwrap();
        assert_eq!(v["shots"], 500);
        assert!(v["accepted"].as_u64().unwrap() <= 500);
    }

    #[test]
    fn curve_starts_clean() {
        let v: serde_json::Value =
            serde_json::from_str(&noise_curve_json("f0", 2.0, 4, 300, 3).unwrap()).unwrap();
        let pts = v.as_array().unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0]["d_bare"], 0.0);
        assert_eq!(pts[0]["post_selection_ratio"], 1.0);
        assert!(noise_curve_json("f0", -1.0, 4, 300, 3).is_err());
    }

    #[test]
    fn census_totals() {
        let v: serde_json::Value =
            serde_json::from_str(&fault_census_json("encoded-dj:f0", false).unwrap()).unwrap();
        assert_eq!(v["total"], 58);
        assert_eq!(v["logical_errors"], 0);
        assert!(fault_census_json("nope", false).is_err());
    }

    #[test]
    fn catalog_lists_everything() {
        let names: Vec<String> = serde_json::from_str(&catalog_json().unwrap()).unwrap();
        assert_eq!(names.len(), circuits::list().len());
    }
}
