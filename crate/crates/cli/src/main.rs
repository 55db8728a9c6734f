//! `dj422` command line: dictionary and fault-tolerance checks, noisy runs,
//! comparisons, sweeps and circuit export.
//!
//! Exit status: 0 when everything passes, 1 when a check fails, 2 on usage
//! errors (bad flags, unknown circuits, invalid probabilities, unwritable
//! output).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dj422::circuits::{self, EntangledId, OracleId};
use dj422::code::{self, DictionaryName};
use dj422::experiment::{self, Encoding, DEFAULT_SEED, DEFAULT_SHOTS};
use dj422::export;
use dj422::ftverify::{self, FtReport};
use dj422::noise::NoiseModel;
use dj422::sim::Parallelism;

#[derive(Parser)]
#[command(
    name = "dj422",
    version,
    about = "Fault-tolerant Deutsch-Jozsa on the [[4,2,2]] code"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every logical-gate dictionary entry on the codespace.
    VerifyTransversal {
        /// paper, conventional or all.
        #[arg(long, default_value = "all")]
        dictionary: String,
        #[command(flatten)]
        out: Output,
    },
    /// Classify every single fault of a circuit (default: all encoded DJ circuits).
    VerifyFt {
        #[arg(long)]
        circuit: Option<String>,
        /// Preparation flips join the primary enumeration when positive.
        #[arg(long, default_value_t = 0.0)]
        pprep: f64,
        /// List every verdict, not just the summary.
        #[arg(long)]
        verbose: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Sample one circuit under noise.
    Run {
        #[arg(long)]
        circuit: String,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        noise: Noise,
        #[command(flatten)]
        out: Output,
    },
    /// Bare against encoded runs, one row per circuit plus the average.
    Compare {
        /// Oracles to compare.
        #[arg(long, value_delimiter = ',', default_value = "f0,fx,f1x,f1")]
        oracles: Vec<String>,
        /// Compare the eight entangled-state circuits instead.
        #[arg(long)]
        entangled: bool,
        /// Use the GPI/GPI2/MS encoded circuits.
        #[arg(long)]
        native: bool,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        noise: Noise,
        #[command(flatten)]
        out: Output,
    },
    /// Compare over a grid of noise strengths (comma-separated lists).
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "0.0095")]
        p1: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.0125")]
        p2: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.0068")]
        pm: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "f0,fx,f1x,f1")]
        oracles: Vec<String>,
        #[arg(long)]
        native: bool,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Output,
    },
    /// Write a circuit as JSON or as a text listing.
    Export {
        #[arg(long)]
        circuit: String,
        #[command(flatten)]
        out: Output,
    },
    /// List the circuit catalog.
    List {
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Sampling {
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    shots: u64,
    /// Master seed; every circuit derives its own stream from it.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (0 = all cores, 1 = serial). Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl Sampling {
    fn parallelism(&self) -> Parallelism {
        match self.threads {
            0 => Parallelism::Auto,
            1 => Parallelism::Serial,
            n => Parallelism::Threads(n),
        }
    }
}

#[derive(Args)]
struct Noise {
    #[arg(long, default_value_t = NoiseModel::CALIBRATED.p1)]
    p1: f64,
    #[arg(long, default_value_t = NoiseModel::CALIBRATED.p2)]
    p2: f64,
    #[arg(long, default_value_t = NoiseModel::CALIBRATED.p_meas)]
    pm: f64,
    #[arg(long, default_value_t = 0.0)]
    pprep: f64,
    #[arg(long)]
    include_idle: bool,
}

impl Noise {
    fn model(&self) -> dj422::Result<NoiseModel> {
        let mut m = NoiseModel::new(self.p1, self.p2, self.pm)?;
        m.p_prep = self.pprep;
        m.include_idle = self.include_idle;
        m.validate()?;
        Ok(m)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Check,
    Usage(String),
}

impl From<dj422::Error> for Failure {
    fn from(e: dj422::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn emit(out: &Output, body: &str) -> Outcome {
    match &out.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialise");
    s.push('\n');
    s
}

fn parse_oracles(names: &[String]) -> Result<Vec<OracleId>, Failure> {
    names
        .iter()
        .map(|n| n.trim().parse::<OracleId>().map_err(Failure::from))
        .collect()
}

fn verify_transversal(dictionary: &str, out: &Output) -> Outcome {
    let dicts = match dictionary {
        "all" => DictionaryName::ALL.to_vec(),
        d => vec![d.parse::<DictionaryName>()?],
    };
    let mut checks = Vec::new();
    for d in dicts {
        checks.extend(code::verify_dictionary(d, 1e-10)?);
    }
    let body = match out.format.unwrap_or(Format::Text) {
        Format::Json => json(&checks),
        Format::Csv => {
            let mut s = String::from("dictionary,gate,physical,leakage,phase_residual,pass\n");
            for c in &checks {
                let _ = writeln!(
                    s,
                    "{},{},{},{:.3e},{:.3e},{}",
                    c.dictionary, c.label, c.physical, c.leakage, c.phase_residual, c.pass
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{:<13} {:<10} {:<24} {:>10} {:>10}  verdict\n",
                "dictionary", "gate", "physical", "leakage", "residual"
            );
            for c in &checks {
                let _ = writeln!(
                    s,
                    "{:<13} {:<10} {:<24} {:>10.2e} {:>10.2e}  {}",
                    c.dictionary.as_str(),
                    c.label,
                    c.physical,
                    c.leakage,
                    c.phase_residual,
                    if c.pass { "PASS" } else { "FAIL" }
                );
            }
            s
        }
    };
    emit(out, &body)?;
    if checks.iter().all(|c| c.pass) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn ft_line(r: &FtReport) -> String {
    format!(
        "{:<24} prep={:<5} faults={:>4} detected={:>4} harmless={:>4} logical_error={:>3}  {}",
        r.circuit,
        r.include_prep,
        r.total,
        r.detected,
        r.harmless,
        r.logical_errors,
        if r.fault_tolerant { "PASS" } else { "FAIL" }
    )
}

fn verify_ft(circuit: Option<&str>, pprep: f64, verbose: bool, out: &Output) -> Outcome {
    if !(0.0..=1.0).contains(&pprep) {
        return Err(Failure::Usage(format!("pprep = {pprep} is outside [0, 1]")));
    }
    let names: Vec<String> = match circuit {
        Some(c) => vec![c.to_string()],
        None => OracleId::ALL
            .iter()
            .flat_map(|o| [format!("encoded-dj:{o}"), format!("encoded-dj-native:{o}")])
            .collect(),
    };
    let primary_prep = pprep > 0.0;
    let mut reports = Vec::new();
    for name in &names {
        let p = circuits::program(name)?;
        let primary = ftverify::verify_fault_tolerance(&p, primary_prep)?;
        let other = ftverify::verify_fault_tolerance(&p, !primary_prep)?;
        reports.push((primary, other));
    }
    let body = match out.format.unwrap_or(Format::Text) {
        Format::Json => {
            let v: Vec<serde_json::Value> = reports
                .iter()
                .map(|(a, b)| {
                    let strip = |r: &FtReport| {
                        let mut v = serde_json::to_value(r).expect("serialises");
                        if !verbose {
                            v.as_object_mut().map(|o| o.remove("verdicts"));
                        }
                        v
                    };
                    serde_json::json!({ "report": strip(a), "alternate": strip(b) })
                })
                .collect();
            json(&v)
        }
        Format::Csv => {
            let mut s = String::from(
                "circuit,include_prep,faults,detected,harmless,logical_errors,fault_tolerant\n",
            );
            for (a, b) in &reports {
                for r in [a, b] {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{}",
                        r.circuit,
                        r.include_prep,
                        r.total,
                        r.detected,
                        r.harmless,
                        r.logical_errors,
                        r.fault_tolerant
                    );
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (a, b) in &reports {
                let _ = writeln!(s, "{}", ft_line(a));
                let _ = writeln!(s, "  also  {}", ft_line(b));
                if let Some(w) = &a.worst {
                    let _ = writeln!(s, "  worst {} deviation {:.6}", w.fault, w.deviation);
                }
                if verbose {
                    for v in &a.verdicts {
                        let _ = writeln!(
                            s,
                            "    {:<22} accept={:.6} {}",
                            v.fault.to_string(),
                            v.accept_probability,
                            v.classification
                        );
                    }
                }
            }
            s
        }
    };
    emit(out, &body)?;
    if reports
        .iter()
        .all(|(a, b)| a.fault_tolerant && b.fault_tolerant)
    {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn comparison_text(cmp: &experiment::Comparison) -> String {
    let mut s = format!(
        "{:<8} {:>7} {:>8} {:>7} {:>9} {:>9} {:>9} {:>9} {:>10} {:>9} {:>10}\n",
        "circuit",
        "shots",
        "accepted",
        "ratio",
        "D_bare",
        "sigma",
        "D_enc",
        "sigma",
        "diff",
        "sigma",
        "reduction"
    );
    for r in cmp.rows.iter().chain(std::iter::once(&cmp.average)) {
        let _ = writeln!(
            s,
            "{:<8} {:>7} {:>8} {:>7.4} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>10.5} {:>9.5} {:>10}",
            r.circuit,
            r.shots,
            r.accepted,
            r.post_selection_ratio,
            r.d_bare,
            r.sigma_bare,
            r.d_enc,
            r.sigma_enc,
            r.diff,
            r.sigma_diff,
            r.reduction_pct
                .map_or_else(|| "n/a".to_string(), |x| format!("{x:.2}%"))
        );
    }
    s
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::VerifyTransversal { dictionary, out } => verify_transversal(&dictionary, &out),
        Command::VerifyFt {
            circuit,
            pprep,
            verbose,
            out,
        } => verify_ft(circuit.as_deref(), pprep, verbose, &out),
        Command::Run {
            circuit,
            sampling,
            noise,
            out,
        } => {
            let p = circuits::program(&circuit)?;
            let r = experiment::run(
                &p,
                sampling.shots,
                &noise.model()?,
                sampling.seed,
                sampling.parallelism(),
            )?;
            let body = match out.format.unwrap_or(Format::Csv) {
                Format::Json => json(&r),
                _ => experiment::run_csv(&r),
            };
            emit(&out, &body)
        }
        Command::Compare {
            oracles,
            entangled,
            native,
            sampling,
            noise,
            out,
        } => {
            let model = noise.model()?;
            let cmp = if entangled {
                experiment::compare_entangled(
                    &EntangledId::ALL,
                    sampling.shots,
                    &model,
                    sampling.seed,
                    sampling.parallelism(),
                )?
            } else {
                let encoding = if native {
                    Encoding::Native
                } else {
                    Encoding::Clifford
                };
                experiment::compare_all(
                    &parse_oracles(&oracles)?,
                    sampling.shots,
                    &model,
                    sampling.seed,
                    encoding,
                    sampling.parallelism(),
                )?
            };
            let body = match out.format.unwrap_or(Format::Csv) {
                Format::Json => json(&cmp),
                Format::Csv => experiment::comparison_csv(&cmp),
                Format::Text => comparison_text(&cmp),
            };
            emit(&out, &body)
        }
        Command::Sweep {
            p1,
            p2,
            pm,
            oracles,
            native,
            sampling,
            out,
        } => {
            let encoding = if native {
                Encoding::Native
            } else {
                Encoding::Clifford
            };
            let rows = experiment::sweep(
                &p1,
                &p2,
                &pm,
                &parse_oracles(&oracles)?,
                sampling.shots,
                sampling.seed,
                encoding,
                sampling.parallelism(),
            )?;
            let body = match out.format.unwrap_or(Format::Csv) {
                Format::Json => json(&rows),
                _ => experiment::sweep_csv(&rows),
            };
            emit(&out, &body)
        }
        Command::Export { circuit, out } => {
            let c = circuits::program(&circuit)?.circuit;
            let body = match out.format.unwrap_or(Format::Json) {
                Format::Text => export::to_text(&c),
                Format::Csv => return Err(Failure::Usage("export supports json or text".into())),
                Format::Json => export::to_json(&c) + "\n",
            };
            emit(&out, &body)
        }
        Command::List { out } => {
            let names = circuits::list();
            let body = match out.format.unwrap_or(Format::Text) {
                Format::Json => json(&names),
                _ => names.join("\n") + "\n",
            };
            emit(&out, &body)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
