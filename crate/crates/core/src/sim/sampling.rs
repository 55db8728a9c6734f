use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::state::{apply_circuit_with_faults, bit_label, StateVector};
use crate::error::{Error, Result};
use crate::noise::{FaultLocation, FaultSampler, NoiseModel, PauliFault};

/// Measured bit strings and how often each occurred.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

impl OutcomeCounts {
    pub fn new(counts: BTreeMap<String, u64>) -> Self {
        let shots = counts.values().sum();
        OutcomeCounts { shots, counts }
    }

    pub fn get(&self, label: &str) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }
}

impl<'a> FromIterator<(&'a str, u64)> for OutcomeCounts {
    fn from_iter<T: IntoIterator<Item = (&'a str, u64)>>(iter: T) -> Self {
        let mut counts = BTreeMap::new();
        for (k, v) in iter {
            *counts.entry(k.to_string()).or_insert(0) += v;
        }
        OutcomeCounts::new(counts)
    }
}

/// How shot batches are spread over threads. Results never depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Serial,
    /// Rayon's global pool (serial without the `parallel` feature).
    #[default]
    Auto,
    /// A dedicated pool of this many threads.
    Threads(usize),
}

/// The random stream for one shot: ChaCha8 keyed by the master seed, with the
/// shot index selecting the stream.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

const BATCH: u64 = 2048;

struct Sampler<'a> {
    circuit: &'a Circuit,
    faults: Option<FaultSampler>,
    ideal_cdf: Vec<f64>,
    zero: StateVector,
}

fn cdf(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

fn invert(cdf: &[f64], u: f64) -> usize {
    let total = *cdf.last().expect("non-empty register");
    let target = u * total;
    let i = cdf.partition_point(|&c| c <= target);
    // Skip zero-width bins at the end caused by the floor.
    i.min(cdf.len() - 1)
}

impl<'a> Sampler<'a> {
    fn new(circuit: &'a Circuit, noise: Option<&NoiseModel>) -> Result<Self> {
        let zero = StateVector::zero(circuit.n_qubits())?;
        let ideal = apply_circuit_with_faults(circuit, &zero, &[])?;
        let faults = noise
            .filter(|m| !m.is_noiseless())
            .map(|m| FaultSampler::new(circuit, m));
        Ok(Sampler {
            circuit,
            faults,
            ideal_cdf: cdf(&ideal.probabilities()),
            zero,
        })
    }

    fn shot(&self, seed: u64, shot: u64) -> Result<usize> {
        let mut rng = shot_rng(seed, shot);
        let sampled = match &self.faults {
            Some(s) => s.sample(&mut rng),
            None => Vec::new(),
        };
        let (flips, quantum): (Vec<PauliFault>, Vec<PauliFault>) = sampled
            .into_iter()
            .partition(|f| matches!(f.location, FaultLocation::PreMeasure { .. }));
        let u: f64 = rng.gen();
        let mut outcome = if quantum.is_empty() {
            invert(&self.ideal_cdf, u)
        } else {
            let state = apply_circuit_with_faults(self.circuit, &self.zero, &quantum)?;
            invert(&cdf(&state.probabilities()), u)
        };
        let n = self.circuit.n_qubits();
        for f in flips {
            if let FaultLocation::PreMeasure { qubit } = f.location {
                outcome ^= 1 << (n - 1 - qubit);
            }
        }
        Ok(outcome)
    }

    fn batch(&self, seed: u64, start: u64, end: u64) -> Result<BTreeMap<usize, u64>> {
        let mut counts = BTreeMap::new();
        for shot in start..end {
            *counts.entry(self.shot(seed, shot)?).or_insert(0) += 1;
        }
        Ok(counts)
    }
}

fn merge(mut a: BTreeMap<usize, u64>, b: BTreeMap<usize, u64>) -> BTreeMap<usize, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Samples `shots` runs of a measured circuit. Each shot draws its own fault
/// set (when `noise` is given) and outcome from [`shot_rng`], so the counts
/// depend only on `(circuit, noise, seed)`.
pub fn sample_shots(
    circuit: &Circuit,
    shots: u64,
    noise: Option<&NoiseModel>,
    seed: u64,
) -> Result<OutcomeCounts> {
    sample_shots_with(circuit, shots, noise, seed, Parallelism::Auto)
}

pub fn sample_shots_with(
    circuit: &Circuit,
    shots: u64,
    noise: Option<&NoiseModel>,
    seed: u64,
    parallelism: Parallelism,
) -> Result<OutcomeCounts> {
    if !circuit.measures() {
        return Err(Error::usage(format!(
            "circuit `{}` has no MeasureAll",
            circuit.name
        )));
    }
    if shots == 0 {
        return Err(Error::usage("shots must be at least 1"));
    }
    if let Some(m) = noise {
        m.validate()?;
    }
    let sampler = Sampler::new(circuit, noise)?;
    let batches: Vec<(u64, u64)> = (0..shots.div_ceil(BATCH))
        .map(|b| (b * BATCH, ((b + 1) * BATCH).min(shots)))
        .collect();
    let by_index = run_batches(&sampler, seed, &batches, parallelism)?;
    let n = circuit.n_qubits();
    Ok(OutcomeCounts {
        shots,
        counts: by_index
            .into_iter()
            .map(|(i, c)| (bit_label(i, n), c))
            .collect(),
    })
}

fn run_serial(
    sampler: &Sampler<'_>,
    seed: u64,
    batches: &[(u64, u64)],
) -> Result<BTreeMap<usize, u64>> {
    batches.iter().try_fold(BTreeMap::new(), |acc, &(s, e)| {
        Ok(merge(acc, sampler.batch(seed, s, e)?))
    })
}

#[cfg(feature = "parallel")]
fn run_batches(
    sampler: &Sampler<'_>,
    seed: u64,
    batches: &[(u64, u64)],
    parallelism: Parallelism,
) -> Result<BTreeMap<usize, u64>> {
    use rayon::prelude::*;
    let par = || {
        batches
            .par_iter()
            .map(|&(s, e)| sampler.batch(seed, s, e))
            .try_reduce(BTreeMap::new, |a, b| Ok(merge(a, b)))
    };
    match parallelism {
        Parallelism::Serial => run_serial(sampler, seed, batches),
        Parallelism::Auto => par(),
        Parallelism::Threads(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::usage(format!("thread pool: {e}")))?
            .install(par),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_batches(
    sampler: &Sampler<'_>,
    seed: u64,
    batches: &[(u64, u64)],
    _parallelism: Parallelism,
) -> Result<BTreeMap<usize, u64>> {
    run_serial(sampler, seed, batches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{GateKind, Segment};

    fn plus() -> Circuit {
        let mut c = Circuit::new("plus", 1).unwrap();
        c.gate(GateKind::H, &[0], Segment::Prep).unwrap();
        c.measure_all().unwrap();
        c
    }

    #[test]
    fn needs_measurement_and_shots() {
        let mut c = Circuit::new("c", 1).unwrap();
        c.gate(GateKind::H, &[0], Segment::Prep).unwrap();
        assert!(sample_shots(&c, 10, None, 1).is_err());
        assert!(sample_shots(&plus(), 0, None, 1).is_err());
    }

    #[test]
    fn deterministic_outcomes_are_exact() {
        let mut c = Circuit::new("one", 2).unwrap();
        c.gate(GateKind::X, &[1], Segment::Prep).unwrap();
        c.measure_all().unwrap();
        let counts = sample_shots(&c, 500, None, 3).unwrap();
        assert_eq!(counts.get("01"), 500);
        assert_eq!(counts.counts.len(), 1);
    }

    #[test]
    fn same_seed_same_counts_any_parallelism() {
        let noise = NoiseModel::new(0.05, 0.05, 0.05).unwrap();
        let c = plus();
        let a = sample_shots_with(&c, 5000, Some(&noise), 9, Parallelism::Serial).unwrap();
        let b = sample_shots_with(&c, 5000, Some(&noise), 9, Parallelism::Threads(3)).unwrap();
        let d = sample_shots_with(&c, 5000, Some(&noise), 9, Parallelism::Auto).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, d);
        let other = sample_shots(&c, 5000, Some(&noise), 10).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn counts_sum_to_shots() {
        let counts = sample_shots(&plus(), 4097, None, 0).unwrap();
        assert_eq!(counts.counts.values().sum::<u64>(), 4097);
        assert_eq!(counts.shots, 4097);
    }

    #[test]
    fn inversion_skips_zero_bins() {
        let c = cdf(&[0.0, 0.5, 0.0, 0.5]);
        assert_eq!(invert(&c, 0.0), 1);
        assert_eq!(invert(&c, 0.49), 1);
        assert_eq!(invert(&c, 0.5), 3);
        assert_eq!(invert(&c, 0.999), 3);
    }
}
