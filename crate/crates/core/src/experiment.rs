//! Noisy runs and their statistics: post-selection, logical marginals,
//! statistical distance, binomial errors and noise reduction.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::circuits::{dj_pair, program, EntangledId, OracleId, Program};
use crate::code;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::sim::{sample_shots_with, OutcomeCounts, Parallelism};

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.576;

/// Shots per run used throughout the hardware experiments.
pub const DEFAULT_SHOTS: u64 = 4096;

/// Master seed used when none is given.
pub const DEFAULT_SEED: u64 = 422;

const SUM_TOL: f64 = 1e-10;

/// ½ Σ |p_i − q_i| over a shared outcome order.
pub fn statistical_distance(ideal: &[f64], observed: &[f64]) -> Result<f64> {
    if ideal.len() != observed.len() {
        return Err(Error::Dimension {
            expected: ideal.len(),
            got: observed.len(),
        });
    }
    for (name, d) in [("ideal", ideal), ("observed", observed)] {
        let s: f64 = d.iter().sum();
        if (s - 1.0).abs() > SUM_TOL || d.iter().any(|p| !(0.0..=1.0 + SUM_TOL).contains(p)) {
            return Err(Error::usage(format!(
                "{name} distribution is not normalised (sum {s})"
            )));
        }
    }
    Ok(ideal
        .iter()
        .zip(observed)
        .map(|(p, q)| (p - q).abs())
        .sum::<f64>()
        / 2.0)
}

/// Binomial standard error of the statistical distance,
/// ½·sqrt(Σ p(1−p)/N).
pub fn sigma_distance(observed: &[f64], n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::usage(
            "standard error needs at least one accepted shot",
        ));
    }
    let var: f64 = observed.iter().map(|p| p * (1.0 - p) / n as f64).sum();
    Ok(0.5 * var.max(0.0).sqrt())
}

/// Error of a difference of independent estimates.
pub fn sigma_difference(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// (d_enc − d_bare) / d_bare, or `None` when d_bare is zero.
pub fn noise_reduction(d_enc: f64, d_bare: f64) -> Option<f64> {
    (d_bare > 0.0).then(|| (d_enc - d_bare) / d_bare)
}

/// Post-selected buckets of a 4-bit counts table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogicalMarginals {
    pub shots: u64,
    pub accepted: u64,
    pub post_selection_ratio: f64,
    /// R_00, R_01, R_10, R_11.
    pub buckets: [f64; 4],
    /// R_0 = R_00 + R_01, R_1 = R_10 + R_11.
    pub r0: f64,
    pub r1: f64,
}

/// Drops odd-parity strings, renormalises and buckets by decoded outcome.
pub fn logical_marginals(counts: &OutcomeCounts) -> Result<LogicalMarginals> {
    let mut hits = [0u64; 4];
    let mut accepted = 0;
    for (bits, &c) in &counts.counts {
        if code::accept(bits)? {
            hits[code::decode(bits)?.index()] += c;
            accepted += c;
        }
    }
    if accepted == 0 {
        return Err(Error::AllRejected {
            shots: counts.shots,
        });
    }
    let buckets = hits.map(|h| h as f64 / accepted as f64);
    Ok(LogicalMarginals {
        shots: counts.shots,
        accepted,
        post_selection_ratio: accepted as f64 / counts.shots as f64,
        buckets,
        r0: buckets[0] + buckets[1],
        r1: buckets[2] + buckets[3],
    })
}

/// Outcome of one noisy run of a program.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub circuit: String,
    pub shots: u64,
    pub accepted: u64,
    pub post_selection_ratio: f64,
    pub labels: Vec<String>,
    pub ideal: Vec<f64>,
    pub observed: Vec<f64>,
    pub distance: f64,
    pub sigma: f64,
    /// Post-selected share of each logical outcome, for four-qubit encoded blocks.
    pub buckets: Option<[f64; 4]>,
    pub counts: OutcomeCounts,
}

/// Stable per-circuit seed so each circuit sees the same stream whatever
/// else is run alongside it.
pub fn circuit_seed(master: u64, name: &str) -> u64 {
    // FNV-1a, then one SplitMix64 round.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = master ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Samples `program` under `model` and scores it against the ideal answers.
pub fn run(
    program: &Program,
    shots: u64,
    model: &NoiseModel,
    seed: u64,
    parallelism: Parallelism,
) -> Result<RunReport> {
    let ideal = program.ideal()?;
    let counts = sample_shots_with(
        &program.circuit,
        shots,
        Some(model),
        circuit_seed(seed, &program.circuit.name),
        parallelism,
    )?;
    let labels = program.decoder.labels();
    let mut hits: BTreeMap<String, u64> = labels.iter().map(|l| (l.clone(), 0)).collect();
    let mut accepted = 0;
    for (bits, &c) in &counts.counts {
        if let Some(label) = program.decoder.decode(bits)? {
            *hits.entry(label).or_default() += c;
            accepted += c;
        }
    }
    if accepted == 0 {
        return Err(Error::AllRejected { shots });
    }
    let observed: Vec<f64> = labels
        .iter()
        .map(|l| hits[l] as f64 / accepted as f64)
        .collect();
    let ideal: Vec<f64> = labels
        .iter()
        .map(|l| ideal.distribution.get(l).copied().unwrap_or(0.0))
        .collect();
    let buckets = match (&program.decoder, program.circuit.n_qubits()) {
        (
            crate::circuits::Decoder::Encoded {
                wires: [0, 1, 2, 3],
                flags,
                ..
            },
            4,
        ) if flags.is_empty() => Some(logical_marginals(&counts)?.buckets),
        _ => None,
    };
    Ok(RunReport {
        circuit: program.circuit.name.clone(),
        shots,
        accepted,
        post_selection_ratio: accepted as f64 / shots as f64,
        distance: statistical_distance(&ideal, &observed)?,
        sigma: sigma_distance(&observed, accepted)?,
        labels,
        ideal,
        observed,
        buckets,
        counts,
    })
}

/// One row of a bare-versus-encoded comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub circuit: String,
    pub shots: u64,
    /// Accepted encoded shots.
    pub accepted: u64,
    pub post_selection_ratio: f64,
    #[serde(rename = "D_bare")]
    pub d_bare: f64,
    pub sigma_bare: f64,
    #[serde(rename = "D_enc")]
    pub d_enc: f64,
    pub sigma_enc: f64,
    pub diff: f64,
    pub sigma_diff: f64,
    /// Percent; `None` when D_bare is zero.
    pub reduction_pct: Option<f64>,
}

impl ComparisonRow {
    pub fn from_distances(
        circuit: impl Into<String>,
        shots: u64,
        accepted: u64,
        (d_bare, sigma_bare): (f64, f64),
        (d_enc, sigma_enc): (f64, f64),
    ) -> Self {
        ComparisonRow {
            circuit: circuit.into(),
            shots,
            accepted,
            post_selection_ratio: if shots == 0 {
                0.0
            } else {
                accepted as f64 / shots as f64
            },
            d_bare,
            sigma_bare,
            d_enc,
            sigma_enc,
            diff: d_enc - d_bare,
            sigma_diff: sigma_difference(sigma_bare, sigma_enc),
            reduction_pct: noise_reduction(d_enc, d_bare).map(|r| 100.0 * r),
        }
    }

    /// D_enc − D_bare lies below zero by more than `z` standard errors.
    pub fn improves_at(&self, z: f64) -> bool {
        self.diff + z * self.sigma_diff < 0.0
    }

    /// Average over rows, reduction taken from the mean distances.
    pub fn average(rows: &[ComparisonRow]) -> Result<ComparisonRow> {
        if rows.is_empty() {
            return Err(Error::usage("nothing to average"));
        }
        let n = rows.len() as f64;
        let mean = |f: fn(&ComparisonRow) -> f64| rows.iter().map(f).sum::<f64>() / n;
        let rms = |f: fn(&ComparisonRow) -> f64| {
            rows.iter().map(|r| f(r).powi(2)).sum::<f64>().sqrt() / n
        };
        Ok(ComparisonRow::from_distances(
            "average",
            rows.iter().map(|r| r.shots).sum(),
            rows.iter().map(|r| r.accepted).sum(),
            (mean(|r| r.d_bare), rms(|r| r.sigma_bare)),
            (mean(|r| r.d_enc), rms(|r| r.sigma_enc)),
        ))
    }
}

/// Which encoded form to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Encoding {
    #[default]
    Clifford,
    Native,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub average: ComparisonRow,
}

pub fn compare_pair(
    label: &str,
    bare: &Program,
    encoded: &Program,
    shots: u64,
    model: &NoiseModel,
    seed: u64,
    parallelism: Parallelism,
) -> Result<ComparisonRow> {
    let b = run(bare, shots, model, seed, parallelism)?;
    let e = run(encoded, shots, model, seed, parallelism)?;
    Ok(ComparisonRow::from_distances(
        label,
        shots,
        e.accepted,
        (b.distance, b.sigma),
        (e.distance, e.sigma),
    ))
}

/// Bare against encoded Deutsch-Jozsa for each oracle, plus the average row.
pub fn compare_all(
    oracles: &[OracleId],
    shots: u64,
    model: &NoiseModel,
    seed: u64,
    encoding: Encoding,
    parallelism: Parallelism,
) -> Result<Comparison> {
    let mut rows = Vec::new();
    for &o in oracles {
        let (bare, enc) = dj_pair(o, encoding == Encoding::Native)?;
        rows.push(compare_pair(
            o.as_str(),
            &bare,
            &enc,
            shots,
            model,
            seed,
            parallelism,
        )?);
    }
    let average = ComparisonRow::average(&rows)?;
    Ok(Comparison { rows, average })
}

/// The same comparison for entangled-state preparations.
pub fn compare_entangled(
    ids: &[EntangledId],
    shots: u64,
    model: &NoiseModel,
    seed: u64,
    parallelism: Parallelism,
) -> Result<Comparison> {
    let mut rows = Vec::new();
    for &id in ids {
        let bare = program(&format!("entangled:{id}:bare"))?;
        let enc = program(&format!("entangled:{id}:encoded"))?;
        rows.push(compare_pair(
            id.as_str(),
            &bare,
            &enc,
            shots,
            model,
            seed,
            parallelism,
        )?);
    }
    let average = ComparisonRow::average(&rows)?;
    Ok(Comparison { rows, average })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub p1: f64,
    pub p2: f64,
    pub p_meas: f64,
    #[serde(flatten)]
    pub row: ComparisonRow,
}

/// Cartesian grid of noise strengths. Every point reuses the same seeds,
/// so neighbouring points differ only through the noise.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    p1s: &[f64],
    p2s: &[f64],
    pms: &[f64],
    oracles: &[OracleId],
    shots: u64,
    seed: u64,
    encoding: Encoding,
    parallelism: Parallelism,
) -> Result<Vec<SweepRow>> {
    if p1s.is_empty() || p2s.is_empty() || pms.is_empty() {
        return Err(Error::usage("sweep grid is empty"));
    }
    let mut out = Vec::new();
    for &p1 in p1s {
        for &p2 in p2s {
            for &pm in pms {
                let model = NoiseModel::new(p1, p2, pm)?;
                let cmp = compare_all(oracles, shots, &model, seed, encoding, parallelism)?;
                for row in cmp.rows.into_iter().chain(std::iter::once(cmp.average)) {
                    out.push(SweepRow {
                        p1,
                        p2,
                        p_meas: pm,
                        row,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Column order of comparison CSVs.
pub const CSV_COLUMNS: [&str; 11] = [
    "circuit",
    "shots",
    "accepted",
    "post_selection_ratio",
    "D_bare",
    "sigma_bare",
    "D_enc",
    "sigma_enc",
    "diff",
    "sigma_diff",
    "reduction_pct",
];

fn fixed(x: f64) -> String {
    let s = format!("{x:.5}");
    // Avoid "-0.00000".
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn csv_fields(r: &ComparisonRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.circuit,
        r.shots,
        r.accepted,
        fixed(r.post_selection_ratio),
        fixed(r.d_bare),
        fixed(r.sigma_bare),
        fixed(r.d_enc),
        fixed(r.sigma_enc),
        fixed(r.diff),
        fixed(r.sigma_diff),
        r.reduction_pct.map_or_else(|| "n/a".to_string(), fixed),
    )
}

/// Comparison rows as CSV, average row last.
pub fn comparison_csv(cmp: &Comparison) -> String {
    let mut s = CSV_COLUMNS.join(",");
    s.push('\n');
    for r in cmp.rows.iter().chain(std::iter::once(&cmp.average)) {
        let _ = writeln!(s, "{}", csv_fields(r));
    }
    s
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = format!("p1,p2,p_meas,{}\n", CSV_COLUMNS.join(","));
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fixed(r.p1),
            fixed(r.p2),
            fixed(r.p_meas),
            csv_fields(&r.row)
        );
    }
    s
}

pub fn run_csv(r: &RunReport) -> String {
    let mut s = String::from(
        "circuit,shots,accepted,post_selection_ratio,outcome,ideal,observed,D,sigma_D\n",
    );
    for ((label, p), q) in r.labels.iter().zip(&r.ideal).zip(&r.observed) {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.circuit,
            r.shots,
            r.accepted,
            fixed(r.post_selection_ratio),
            label,
            fixed(*p),
            fixed(*q),
            fixed(r.distance),
            fixed(r.sigma)
        );
    }
    s
}
