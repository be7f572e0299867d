//! Command-line front end: loads states and ensembles from JSON, dispatches
//! to the library, and emits JSON or CSV reports.
//!
//! Exit codes: 0 on success, 2 on input validation failures, 3 on numeric
//! domain errors, 64 on an unknown subcommand.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use discordia::game::{self, CertifyStrategy, EncodingEnsemble};
use discordia::gaussian::gaussian_discord;
use discordia::keyrates::{lossy_rr_rate, plob, plob_high_loss, RateReport};
use discordia::{info, GaussianState, QState};

#[derive(Parser)]
#[command(
    name = "discordia",
    version,
    about = "Quantum correlation measures, guessing games, and key-rate bounds",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutual information, classical correlations, and discord of a state.
    Discord {
        /// JSON state file, finite ("dims") or Gaussian ("modes").
        #[arg(long)]
        state: PathBuf,
        /// Subsystem or mode to measure.
        #[arg(long, default_value_t = 1)]
        measure: usize,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Channel-guessing game diagnostics for a state and an ensemble.
    Game {
        /// JSON file holding a finite-dimensional two-qubit state.
        #[arg(long)]
        state: PathBuf,
        /// JSON file holding the unitary encoding ensemble.
        #[arg(long)]
        ensemble: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled certification of an entangling measurement.
    Certify {
        /// JSON file holding a finite-dimensional two-qubit state.
        #[arg(long)]
        state: PathBuf,
        /// One of: memoryless, classical, quantum_bell.
        #[arg(long)]
        strategy: String,
        #[arg(long, default_value_t = 10_000)]
        rounds: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Optional CSV path for the per-round transcript.
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reverse-reconciliation rates for the lossy channel.
    CvRate {
        /// Transmissivity: a single value or a range "start:end:step".
        #[arg(long)]
        eta: String,
        /// Probe variance for a single-point evaluation.
        #[arg(long)]
        mu: Option<f64>,
        /// Comma-separated probe variances, overriding --mu.
        #[arg(long)]
        mu_list: Option<String>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Emit the long-form convergence table over mu in {1e2, 1e3, 1e4}.
        #[arg(long)]
        convergence: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeaterless capacity and its high-loss linearization.
    PlobSweep {
        /// Transmissivity: a single value or a range "start:end:step".
        #[arg(long)]
        eta: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Failure category carrying the process exit code.
#[derive(Debug)]
enum Failure {
    /// Unreadable files, schema violations, flag misuse: exit 2.
    Validation(String),
    /// Mathematically out-of-range requests, such as eta = 1: exit 3.
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Domain(_) => 3,
        }
    }

    fn validation(message: impl Into<String>) -> Self {
        Failure::Validation(message.into())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) | Failure::Domain(m) => write!(f, "{m}"),
        }
    }
}

impl From<discordia::Error> for Failure {
    fn from(err: discordia::Error) -> Self {
        match err {
            discordia::Error::Domain(m) => Failure::Domain(m),
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Validation(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand => 64,
                _ => 2,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    cap_worker_threads()?;
    match command {
        Command::Discord {
            state,
            measure,
            out,
        } => {
            let report = match load_state(&state)? {
                LoadedState::Finite(q) => to_json(&info::discord(&q, measure)?)?,
                LoadedState::Gaussian(g) => to_json(&gaussian_discord(&g, measure)?)?,
            };
            emit(out.as_deref(), report.as_bytes())
        }
        Command::Game {
            state,
            ensemble,
            out,
        } => {
            let q = load_finite(&state)?;
            let text = read_input(&ensemble)?;
            let ensemble: EncodingEnsemble = serde_json::from_str(&text)
                .map_err(|e| Failure::validation(format!("{}: {e}", ensemble.display())))?;
            let report = game::run_game(&q, &ensemble)?;
            emit(out.as_deref(), to_json(&report)?.as_bytes())
        }
        Command::Certify {
            state,
            strategy,
            rounds,
            seed,
            transcript,
            out,
        } => {
            let q = load_finite(&state)?;
            let strategy = CertifyStrategy::from_str(&strategy)
                .map_err(|e| Failure::validation(e.to_string()))?;
            let report = game::certify(&q, strategy, rounds, seed)?;
            if let Some(path) = transcript {
                let mut csv = String::from("round,k,guess\n");
                for (round, (k, guess)) in report.transcript.iter().enumerate() {
                    csv.push_str(&format!("{round},{k},{guess}\n"));
                }
                write_atomic(&path, csv.as_bytes())?;
            }
            emit(out.as_deref(), to_json(&report)?.as_bytes())
        }
        Command::CvRate {
            eta,
            mu,
            mu_list,
            format,
            convergence,
            out,
        } => {
            let etas = parse_value_spec(&eta, "eta")?;
            let mus = match (mu_list, mu, convergence) {
                (Some(list), _, _) => parse_value_list(&list, "mu-list")?,
                (None, Some(single), _) => vec![single],
                (None, None, true) => vec![1e2, 1e3, 1e4],
                (None, None, false) => vec![1e4],
            };
            if convergence && format == Some(Format::Json) {
                return Err(Failure::validation(
                    "the convergence table is CSV only; drop --format json",
                ));
            }
            let pairs: Vec<(f64, f64)> = etas
                .iter()
                .flat_map(|&e| mus.iter().map(move |&m| (e, m)))
                .collect();
            let reports: Vec<RateReport> = pairs
                .par_iter()
                .map(|&(e, m)| lossy_rr_rate(e, m))
                .collect::<Result<_, _>>()?;
            let body = if convergence {
                convergence_csv(&mus, &etas, &reports)
            } else {
                match format.unwrap_or(Format::Json) {
                    Format::Csv => rate_csv(&reports),
                    Format::Json if reports.len() == 1 => to_json(&reports[0])?,
                    Format::Json => to_json(&reports)?,
                }
            };
            emit(out.as_deref(), body.as_bytes())
        }
        Command::PlobSweep { eta, out } => {
            let etas = parse_value_spec(&eta, "eta")?;
            let mut csv = String::from("eta,plob,linearization\n");
            for &e in &etas {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    sig6(e),
                    sig6(plob(e)?),
                    sig6(plob_high_loss(e))
                ));
            }
            emit(out.as_deref(), csv.as_bytes())
        }
    }
}

/// Applies the DISCORDIA_THREADS cap to the worker pool before any
/// parallel sweep starts.
fn cap_worker_threads() -> Result<(), Failure> {
    match std::env::var("DISCORDIA_THREADS") {
        Ok(raw) => {
            let threads: usize = raw.trim().parse().map_err(|_| {
                Failure::validation(format!(
                    "DISCORDIA_THREADS must be a positive integer, got {raw:?}"
                ))
            })?;
            if threads == 0 {
                return Err(Failure::validation(
                    "DISCORDIA_THREADS must be a positive integer, got 0",
                ));
            }
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

enum LoadedState {
    Finite(QState),
    Gaussian(GaussianState),
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

/// Loads a state file, inferring the representation from its top-level
/// key: "dims" marks a finite state, "modes" a Gaussian one.
fn load_state(path: &Path) -> Result<LoadedState, Failure> {
    let text = read_input(path)?;
    let probe: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    let loaded = if probe.get("dims").is_some() {
        LoadedState::Finite(parse_state(&text, path)?)
    } else if probe.get("modes").is_some() {
        LoadedState::Gaussian(parse_state(&text, path)?)
    } else {
        return Err(Failure::validation(format!(
            "{}: state file needs either a \"dims\" (finite) or \"modes\" (Gaussian) field",
            path.display()
        )));
    };
    Ok(loaded)
}

fn parse_state<T: serde::de::DeserializeOwned>(text: &str, path: &Path) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

fn load_finite(path: &Path) -> Result<QState, Failure> {
    match load_state(path)? {
        LoadedState::Finite(q) => Ok(q),
        LoadedState::Gaussian(_) => Err(Failure::validation(format!(
            "{}: this subcommand needs a finite-dimensional state",
            path.display()
        ))),
    }
}

/// Parses "0.4" or "start:end:step" into an inclusive list of values.
fn parse_value_spec(spec: &str, flag: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Failure::validation(format!("--{flag}: {s:?} is not a number")))
    };
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [start, end, step] => {
            let (start, end, step) = (parse(start)?, parse(end)?, parse(step)?);
            if !(step > 0.0) || end < start {
                return Err(Failure::validation(format!(
                    "--{flag}: range needs start <= end and step > 0, got {spec:?}"
                )));
            }
            let count = ((end - start) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|i| start + step * i as f64).collect())
        }
        _ => Err(Failure::validation(format!(
            "--{flag}: expected a value or start:end:step, got {spec:?}"
        ))),
    }
}

fn parse_value_list(list: &str, flag: &str) -> Result<Vec<f64>, Failure> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::validation(format!("--{flag}: {s:?} is not a number")))
        })
        .collect()
}

/// Six significant digits with a plain decimal point, the CSV number
/// format.
fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (5 - exponent).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

fn rate_csv(reports: &[RateReport]) -> String {
    let mut csv = String::from("eta,mu,rci,discord_ba,plob,gap\n");
    for r in reports {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            sig6(r.eta),
            sig6(r.mu),
            sig6(r.reverse_coherent_info),
            sig6(r.discord_ba),
            sig6(r.plob),
            sig6(r.gap)
        ));
    }
    csv
}

/// Long-form table grouped by mu, one row per quantity, for convergence
/// plots over the squeezing ladder.
fn convergence_csv(mus: &[f64], etas: &[f64], reports: &[RateReport]) -> String {
    let mut csv = String::from("mu,eta,quantity,value\n");
    for (mi, &mu) in mus.iter().enumerate() {
        for (ei, &eta) in etas.iter().enumerate() {
            // Reports are laid out eta-major, mu-minor.
            let r = &reports[ei * mus.len() + mi];
            for (name, value) in [
                ("rci", r.reverse_coherent_info),
                ("discord_ba", r.discord_ba),
                ("plob", r.plob),
                ("gap", r.gap),
            ] {
                csv.push_str(&format!(
                    "{},{},{name},{}\n",
                    sig6(mu),
                    sig6(eta),
                    sig6(value)
                ));
            }
        }
    }
    csv
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::validation(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => write_atomic(path, bytes),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

/// Writes through a sibling temp file and renames, so readers never see a
/// partial report.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .map_err(|e| Failure::validation(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_keeps_six_significant_digits() {
        assert_eq!(sig6(1.0), "1.00000");
        assert_eq!(sig6(0.5), "0.500000");
        assert_eq!(sig6(0.014499569695115076), "0.0144996");
        assert_eq!(sig6(3.321928094887362), "3.32193");
        assert_eq!(sig6(10000.0), "10000.0");
        assert_eq!(sig6(0.0), "0.00000");
        assert_eq!(sig6(-0.25), "-0.250000");
    }

    #[test]
    fn value_specs_parse_singles_and_ranges() {
        assert_eq!(parse_value_spec("0.4", "eta").unwrap(), vec![0.4]);
        let range = parse_value_spec("0.1:0.9:0.1", "eta").unwrap();
        assert_eq!(range.len(), 9);
        assert!((range[0] - 0.1).abs() < 1e-12);
        assert!((range[8] - 0.9).abs() < 1e-9);
        assert!(parse_value_spec("0.9:0.1:0.1", "eta").is_err());
        assert!(parse_value_spec("a:b", "eta").is_err());
    }

    #[test]
    fn value_lists_parse_commas() {
        assert_eq!(
            parse_value_list("1e2, 1e3,1e4", "mu-list").unwrap(),
            vec![100.0, 1000.0, 10000.0]
        );
        assert!(parse_value_list("1,x", "mu-list").is_err());
    }
}
