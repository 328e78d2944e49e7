//! Command-line surface: `analyze`, `eta`, `simulate`, `verify`.
//!
//! Exit codes: 0 success, 1 violations found, 2 input error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::comparability::ComparabilityFacts;
use crate::engine::{analyze_with, render_text, AnalysisInputs, AnalysisReport, VerdictStatus};
use crate::eta::{eta_decide, EtaQuery, EtaWitness};
use crate::io::{parse_document, parse_init, to_json, SystemDocument};
use crate::model::IndexSet;
use crate::number::Rational;
use crate::rules::Sequence;
use crate::simulate::{
    empirical_bound, random_initial_conditions, simulate, validate_all, write_csv, BoundVerdict,
    CertificateCheck, InitialConditions, Trajectory, TrajectoryStatus,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ratdiff",
    version,
    about = "Boundedness analysis for systems of rational difference equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Float,
    Exact,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report comparability facts, theorem applications and verdicts.
    Analyze {
        file: PathBuf,
        /// Also write the JSON report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print a plain-text report instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Decide the window-sum condition for a source and target set.
    Eta {
        #[arg(long)]
        k: usize,
        /// Comma-separated lags, empty for the empty set.
        #[arg(long, allow_hyphen_values = true)]
        source: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Print the decision as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Generate a trajectory and write it as CSV.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Float)]
        mode: ModeArg,
        /// Initial conditions file; defaults to the document's `init`.
        #[arg(long)]
        init: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate random initial conditions and cross-check the analysis.
    Verify {
        file: PathBuf,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: u64,
        /// Draw initial conditions from [1e-3, 10] instead of [0, 10].
        #[arg(long)]
        positive_init: bool,
        /// Index after which bounds are checked; defaults to steps / 2.
        #[arg(long)]
        burn_in: Option<usize>,
        /// Also write the JSON summary to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<SystemDocument, CliError> {
    parse_document(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_lags(text: &str, what: &str) -> Result<IndexSet, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::Input(format!("{what}: {s:?} is not a lag")))
        })
        .collect()
}

fn inputs_of(doc: &SystemDocument) -> AnalysisInputs {
    AnalysisInputs {
        user_facts: doc.facts.clone(),
        asserted_bounds: doc.asserted_bounds.clone(),
        empirical_bounds: Vec::new(),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Analyze { file, report, text } => {
            let doc = load(&file)?;
            let r = analyze_with(&doc.system, &inputs_of(&doc));
            let json = to_json(&r);
            if let Some(path) = report {
                fs::write(&path, &json)?;
            }
            if text {
                write!(out, "{}", render_text(&r))?;
            } else {
                write!(out, "{json}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Eta {
            k,
            source,
            target,
            json,
        } => {
            let q = EtaQuery::new(
                k,
                parse_lags(&source, "source")?,
                parse_lags(&target, "target")?,
            )
            .map_err(|e| CliError::Input(e.to_string()))?;
            let d = eta_decide(&q);
            if json {
                write!(out, "{}", to_json(&d))?;
            } else {
                writeln!(out, "{d}")?;
                match &d.witness {
                    Some(EtaWitness::Surviving { sequence }) => {
                        writeln!(out, "longest surviving sequence: {sequence:?}")?
                    }
                    Some(EtaWitness::Cycle { prefix, cycle, .. }) => {
                        writeln!(out, "never hits: prefix {prefix:?} then repeat {cycle:?}")?
                    }
                    None => {}
                }
            }
            Ok(EXIT_OK)
        }
        Command::Simulate {
            file,
            steps,
            mode,
            init,
            out: path,
        } => {
            let doc = load(&file)?;
            let init = match init {
                Some(p) => parse_init(&read(&p)?, doc.system.k)
                    .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
                None => doc.init.clone().ok_or_else(|| {
                    CliError::Input("no initial conditions: pass --init or add \"init\"".into())
                })?,
            };
            let mut buf = Vec::new();
            let status = match mode {
                ModeArg::Float => {
                    let t: Trajectory<f64> = simulate(&doc.system, &init, steps);
                    write_csv(&t, &mut buf)?;
                    t.status
                }
                ModeArg::Exact => {
                    let t: Trajectory<Rational> = simulate(&doc.system, &init, steps);
                    write_csv(&t, &mut buf)?;
                    t.status
                }
            };
            fs::write(&path, buf)?;
            writeln!(
                out,
                "{}",
                serde_json::to_string(&status).expect("serializable")
            )?;
            Ok(if status == TrajectoryStatus::Completed {
                EXIT_OK
            } else {
                EXIT_VIOLATIONS
            })
        }
        Command::Verify {
            file,
            trials,
            steps,
            seed,
            positive_init,
            burn_in,
            report,
        } => {
            let doc = load(&file)?;
            let analysis = analyze_with(&doc.system, &inputs_of(&doc));
            let summary = verify(
                &doc,
                &analysis,
                &VerifyOptions {
                    trials,
                    steps,
                    seed,
                    positive_init,
                    burn_in: burn_in.unwrap_or(steps / 2),
                },
            );
            let json = to_json(&summary);
            if let Some(path) = report {
                fs::write(&path, &json)?;
            }
            write!(out, "{json}")?;
            Ok(if summary.violations == 0 {
                EXIT_OK
            } else {
                EXIT_VIOLATIONS
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub trials: usize,
    pub steps: usize,
    pub seed: u64,
    pub positive_init: bool,
    pub burn_in: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub index: usize,
    pub status: TrajectoryStatus,
    pub certificates: Vec<(String, CertificateCheck)>,
    pub x: BoundVerdict,
    pub y: BoundVerdict,
    pub problems: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub trials: Vec<TrialOutcome>,
    pub claimed_bounded: Vec<Sequence>,
    pub violations: usize,
}

/// Initial conditions for trial `index`: uniform on `[0, 10]`, or `[1e-3, 10]`.
pub fn trial_init(k: usize, seed: u64, index: usize, positive: bool) -> InitialConditions {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let low = if positive { 1e-3 } else { 0.0 };
    random_initial_conditions(k, &mut rng, low, 10.0)
}

/// Simulates seeded trials and checks concrete certificates and claimed bounds.
pub fn verify(
    doc: &SystemDocument,
    analysis: &AnalysisReport,
    opts: &VerifyOptions,
) -> VerifySummary {
    let claimed: Vec<Sequence> = [Sequence::X, Sequence::Y]
        .into_iter()
        .filter(|&s| analysis.verdict(s).status == VerdictStatus::ProvenBounded)
        .collect();
    let facts: &ComparabilityFacts = &analysis.comparability;
    let mut violations = 0;
    let trials = (0..opts.trials)
        .map(|index| {
            let init = trial_init(doc.system.k, opts.seed, index, opts.positive_init);
            let t: Trajectory<f64> = simulate(&doc.system, &init, opts.steps);
            let certificates = validate_all(&t, facts.iter());
            let x = empirical_bound(&t, Sequence::X, opts.burn_in);
            let y = empirical_bound(&t, Sequence::Y, opts.burn_in);
            let mut problems = Vec::new();
            for (key, check) in &certificates {
                if let CertificateCheck::ViolatedAt { n } = check {
                    problems.push(format!("{key} violated at n = {n}"));
                }
            }
            for (s, v) in [(Sequence::X, &x), (Sequence::Y, &y)] {
                if claimed.contains(&s) && v.is_diverging() {
                    problems.push(format!("{} is claimed bounded but diverges", s.name()));
                }
            }
            violations += problems.len();
            TrialOutcome {
                index,
                status: t.status,
                certificates,
                x,
                y,
                problems,
            }
        })
        .collect();
    VerifySummary {
        trials,
        claimed_bounded: claimed,
        violations,
    }
}
