//! Command-line front end: structural analysis, online duels, learning-curve
//! experiments, rate fitting, distribution inspection, and the acceptance
//! suite.
//!
//! Exit codes: 0 success, 1 configuration/usage error, 2 exceeded budget,
//! 3 failed acceptance check.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Deserialize;

use trichotomy::classes::{ClassSpec, ConceptClass};
use trichotomy::harness::{
    fit_rate, materialize_distribution, run_experiment, trichotomy_report, CurveMetric,
    ExperimentSpec, LearningCurve, SearchCaps,
};
use trichotomy::online::{run_duel, TreeAdversary};
use trichotomy::selftest::run_all;
use trichotomy::{Error, Result};

#[derive(Parser)]
#[command(
    name = "trichotomy",
    version,
    about = "Exact tree search, online learning duels, and learning-curve experiments \
             over finite concept classes"
)]
struct Cli {
    /// Size of the worker-thread pool for seed-parallel experiments
    /// (default: one per CPU).  Results are bit-identical regardless.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural rate verdict for a class: Littlestone/VC/VCL evidence and
    /// the exponential / linear / arbitrarily-slow classification, as JSON.
    Analyze {
        /// TOML file with a [class] table (and optional [caps] table with
        /// littlestone_cap / vc_cap / vcl_cap).
        #[arg(long)]
        spec: PathBuf,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play the online learner against a deepest-witness-tree adversary and
    /// print the transcript.
    Duel {
        /// TOML file with a [class] table (and optional top-level `cap`,
        /// the tree-search depth cap; default 6).
        #[arg(long)]
        spec: PathBuf,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a learning-curve experiment and emit the curve as CSV.
    Curve {
        /// TOML experiment spec (class, dist, learner, n_grid, seeds,
        /// root_seed, optional out path).
        #[arg(long)]
        spec: PathBuf,
        /// Override the spec's root seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write here instead of the spec's `out` path / stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit decay models to a curve CSV (as written by `curve`) and emit
    /// both per-metric fits as JSON.
    Fit {
        /// Curve CSV file with the header n,mean_err,p_nonzero,stderr,seeds.
        #[arg(long)]
        spec: PathBuf,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Materialize the distribution an experiment spec resolves to and
    /// print its support, masses, and certificate.
    Describe {
        /// TOML experiment spec.
        #[arg(long)]
        spec: PathBuf,
        /// Seed index for per-seed targets (default 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite: nine checks, one PASS/FAIL line each.
    Selftest {
        /// Also write the report lines here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// TOML shape for `analyze`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalyzeFile {
    class: ClassSpec,
    #[serde(default)]
    caps: Option<SearchCaps>,
}

/// TOML shape for `duel`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DuelFile {
    class: ClassSpec,
    #[serde(default)]
    cap: Option<u32>,
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn parse_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    toml::from_str(&read_file(path)?)
        .map_err(|e| Error::Config(format!("bad spec file {}: {e}", path.display())))
}

/// Write to `out` when given, stdout otherwise.
fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_analyze(spec: &Path, out: Option<&Path>) -> Result<()> {
    let file: AnalyzeFile = parse_toml(spec)?;
    let record = trichotomy_report(&file.class, &file.caps.unwrap_or_default())?;
    let json = serde_json::to_string_pretty(&record)
        .map_err(|e| Error::Config(format!("unserializable verdict: {e}")))?;
    emit(out, &format!("{json}\n"))
}

fn cmd_duel(spec: &Path, out: Option<&Path>) -> Result<()> {
    let file: DuelFile = parse_toml(spec)?;
    let class = ConceptClass::generate(&file.class)?;
    let mut adversary = TreeAdversary::deepest(&class, file.cap.unwrap_or(6))?;
    let depth = adversary.depth();
    let transcript = run_duel(&class, &mut adversary)?;
    let mut text = String::new();
    for round in &transcript {
        text.push_str(&format!(
            "round {}: x = {}, predicted {}, label {}{}\n",
            round.round,
            class.domain().label(round.x),
            round.prediction,
            round.label,
            if round.mistake { ", MISTAKE" } else { "" }
        ));
    }
    let mistakes = transcript.iter().filter(|r| r.mistake).count();
    text.push_str(&format!(
        "{mistakes} mistakes over {} rounds against a depth-{depth} witness tree\n",
        transcript.len()
    ));
    emit(out, &text)
}

fn cmd_curve(spec: &Path, seed: Option<u64>, out: Option<&Path>) -> Result<()> {
    let mut experiment = ExperimentSpec::from_toml(&read_file(spec)?)?;
    if let Some(seed) = seed {
        experiment.root_seed = seed;
    }
    let curve = run_experiment(&experiment)?;
    let csv = curve.to_csv();
    let spec_out = experiment.out.as_ref().map(PathBuf::from);
    emit(out.or(spec_out.as_deref()), &csv)
}

fn cmd_fit(spec: &Path, out: Option<&Path>) -> Result<()> {
    let curve = LearningCurve::from_csv(&read_file(spec)?)?;
    let fits = serde_json::json!({
        "mean_error": fit_rate(&curve, CurveMetric::MeanError)?,
        "p_nonzero": fit_rate(&curve, CurveMetric::PNonzero)?,
    });
    let json = serde_json::to_string_pretty(&fits)
        .map_err(|e| Error::Config(format!("unserializable fit: {e}")))?;
    emit(out, &format!("{json}\n"))
}

fn cmd_describe(spec: &Path, seed: Option<u64>, out: Option<&Path>) -> Result<()> {
    let experiment = ExperimentSpec::from_toml(&read_file(spec)?)?;
    let dist = materialize_distribution(&experiment, seed.unwrap_or(0) as usize)?;
    let mut text = String::new();
    for line in dist.describe_lines() {
        text.push_str(&line);
        text.push('\n');
    }
    emit(out, &text)
}

/// Runs every criterion; returns whether all passed.
fn cmd_selftest(out: Option<&Path>) -> Result<bool> {
    let reports = run_all()?;
    let mut text = String::new();
    for report in &reports {
        let line = report.line();
        println!("{line}");
        text.push_str(&line);
        text.push('\n');
    }
    if let Some(path) = out {
        std::fs::write(path, &text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(reports.iter().all(|r| r.passed))
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Error::Config(format!("cannot size the thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Analyze { spec, out } => cmd_analyze(spec, out.as_deref())?,
        Command::Duel { spec, out } => cmd_duel(spec, out.as_deref())?,
        Command::Curve { spec, seed, out } => cmd_curve(spec, *seed, out.as_deref())?,
        Command::Fit { spec, out } => cmd_fit(spec, out.as_deref())?,
        Command::Describe { spec, seed, out } => cmd_describe(spec, *seed, out.as_deref())?,
        Command::Selftest { out } => {
            if !cmd_selftest(out.as_deref())? {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
