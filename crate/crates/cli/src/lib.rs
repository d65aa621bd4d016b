//! Front end for the `lttcheck` binary: argument parsing, the three commands
//! and the JSON run report.
//!
//! Every command writes its machine output to `out` and human-readable
//! diagnostics to `err`; [`run`] returns the process exit code.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use ltt_core::corpus::{random_dfa, seeded};
use ltt_core::dfa::parse_dfa_with;
use ltt_core::lt::{
    is_locally_testable_direct, is_locally_testable_fast_timed, is_locally_testable_semigroup,
};
use ltt_core::ltt::is_locally_threshold_testable_timed;
use ltt_core::profile::{is_kl_testable, search_witness, DEFAULT_PROFILE_BUDGET};
use ltt_core::semigroup::{check_identity_eq1, generate_semigroup, is_aperiodic, DEFAULT_BUDGET};
use ltt_core::{serialize, CheckOptions, Dfa, PhaseTimes, Reason, Witness};

pub const SCHEMA_VERSION: u32 = 1;

/// Draws without a match after which `random --filter` gives up.
pub const MAX_FILTER_DRAWS: u64 = 1_000_000;

pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 1;
    pub const BUDGET: i32 = 2;
    pub const DISAGREEMENT: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(
    name = "lttcheck",
    version,
    about = "Local (threshold) testability of finite automata"
)]
pub struct Cli {
    /// Worker threads for the graph checkers (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Emit JSON on stdout. This is the only output format.
    #[arg(long, global = true, default_value_t = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide local (threshold) testability of an automaton.
    Check(CheckArgs),
    /// Print seeded random complete automata.
    Random(RandomArgs),
    /// Search for (k, l) such that the accepted language is l-threshold k-testable.
    Witness(WitnessArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ltt,
    Lt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Graph,
    Semigroup,
    Direct,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Filter {
    None,
    Ltt,
    NotLtt,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,

    /// Route missing transitions to a fresh rejecting sink state.
    #[arg(long)]
    pub complete_with_sink: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, value_enum, default_value_t = Mode::Ltt)]
    pub mode: Mode,

    #[arg(long, value_enum, default_value_t = Algorithm::All)]
    pub algorithm: Algorithm,

    /// Maximum number of transition semigroup elements.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget_elements: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RandomArgs {
    #[arg(long)]
    pub states: usize,

    #[arg(long, default_value_t = 2)]
    pub letters: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 1)]
    pub count: usize,

    #[arg(long, value_enum, default_value_t = Filter::None)]
    pub filter: Filter,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, default_value_t = 3)]
    pub kmax: usize,

    #[arg(long, default_value_t = 3)]
    pub lmax: usize,

    /// Maximum number of reachable profile-product states per (k, l).
    #[arg(long, default_value_t = DEFAULT_PROFILE_BUDGET)]
    pub budget_elements: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },

    #[error("{0}")]
    Core(#[from] ltt_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("no automaton matched the filter in {draws} draws")]
    Starvation { draws: u64 },

    #[error("write failed: {0}")]
    Write(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_budget() => exit::BUDGET,
            CliError::Starvation { .. } => exit::BUDGET,
            _ => exit::INPUT,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerdictEntry {
    pub algorithm: String,
    pub outcome: bool,
    pub reason: Reason,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SearchReport {
    pub kmax: usize,
    pub lmax: usize,
    pub found: Option<(usize, usize)>,
    pub skipped: Vec<(usize, usize)>,
    pub one_sided: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ErrorReport {
    pub exit_code: i32,
    pub message: String,
}

/// One invocation's machine-readable result.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunReport {
    pub schema_version: u32,
    /// SHA-256 of the input file bytes, lowercase hex.
    pub digest: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    pub verdicts: Vec<VerdictEntry>,
    /// Present when more than one algorithm ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    /// Milliseconds per phase, plus `total`.
    pub timing_ms: BTreeMap<String, f64>,
    pub semigroup_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

impl RunReport {
    fn new(command: &str, digest: String) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            digest,
            command: command.to_string(),
            mode: None,
            verdicts: Vec::new(),
            agreement: None,
            timing_ms: BTreeMap::new(),
            semigroup_size: None,
            search: None,
            error: None,
        }
    }

    fn push(&mut self, algorithm: &str, v: ltt_core::Verdict) {
        self.verdicts.push(VerdictEntry {
            algorithm: algorithm.to_string(),
            outcome: v.outcome,
            reason: v.reason,
            witness: v.witness,
        });
    }

    fn record(&mut self, prefix: &str, times: &PhaseTimes) {
        for (name, d) in times.phases() {
            self.timing_ms.insert(format!("{prefix}.{name}"), millis(*d));
        }
    }

    /// Exit code implied by the report contents.
    pub fn exit_code(&self) -> i32 {
        match (self.agreement, &self.error) {
            (Some(false), _) => exit::DISAGREEMENT,
            (_, Some(e)) => e.exit_code,
            _ => exit::OK,
        }
    }
}

fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_input(args: &InputArgs) -> Result<(Vec<u8>, String), CliError> {
    let bytes = std::fs::read(&args.input).map_err(|source| CliError::Read {
        path: args.input.clone(),
        source,
    })?;
    let digest = digest(&bytes);
    Ok((bytes, digest))
}

fn load(bytes: &[u8], path: &Path, complete_with_sink: bool) -> Result<Dfa, CliError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| CliError::Usage(format!("{}: not UTF-8: {e}", path.display())))?;
    let (dfa, _) = parse_dfa_with(text, complete_with_sink)?;
    let valid = dfa.validate();
    if !valid.outcome {
        let detail = match valid.witness {
            Some(Witness::Invariant { message, .. }) => message,
            _ => format!("{:?}", valid.reason),
        };
        return Err(CliError::Core(ltt_core::Error::Invalid(detail)));
    }
    Ok(dfa)
}

fn options(workers: Option<usize>) -> CheckOptions {
    CheckOptions {
        workers,
        ..CheckOptions::default()
    }
}

/// Runs the requested checkers. Budget failures end up in `report.error`
/// alongside whatever verdicts were already computed.
pub fn cmd_check(args: &CheckArgs, workers: Option<usize>) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let (bytes, digest) = read_input(&args.input)?;
    let mut report = RunReport::new("check", digest);
    report.mode = Some(
        match args.mode {
            Mode::Ltt => "ltt",
            Mode::Lt => "lt",
        }
        .to_string(),
    );
    let dfa = load(&bytes, &args.input.input, args.input.complete_with_sink)?;
    let opts = options(workers);

    let algorithms = match (args.mode, args.algorithm) {
        (Mode::Ltt, Algorithm::Direct) => {
            return Err(CliError::Usage(
                "the direct algorithm is only available with --mode lt".into(),
            ))
        }
        (Mode::Ltt, Algorithm::All) => vec![Algorithm::Graph, Algorithm::Semigroup],
        (Mode::Lt, Algorithm::All) => vec![Algorithm::Graph, Algorithm::Direct, Algorithm::Semigroup],
        (_, a) => vec![a],
    };

    for alg in algorithms {
        if let Err(e) = run_algorithm(&dfa, args, alg, &opts, &mut report) {
            let e = CliError::Core(e);
            report.error = Some(ErrorReport {
                exit_code: e.exit_code(),
                message: e.to_string(),
            });
            break;
        }
    }
    if report.verdicts.len() > 1 {
        let first = report.verdicts[0].outcome;
        report.agreement = Some(report.verdicts.iter().all(|v| v.outcome == first));
    }
    report.timing_ms.insert("total".into(), millis(started.elapsed()));
    Ok(report)
}

fn run_algorithm(
    dfa: &Dfa,
    args: &CheckArgs,
    alg: Algorithm,
    opts: &CheckOptions,
    report: &mut RunReport,
) -> ltt_core::Result<()> {
    match (args.mode, alg) {
        (Mode::Ltt, Algorithm::Graph) => {
            let (v, times) = is_locally_threshold_testable_timed(dfa, opts)?;
            report.record("graph", &times);
            report.push("graph", v);
        }
        (Mode::Lt, Algorithm::Graph) => {
            let (v, times) = is_locally_testable_fast_timed(dfa, opts)?;
            report.record("graph", &times);
            report.push("graph", v);
        }
        (Mode::Lt, Algorithm::Direct) => {
            let mut times = PhaseTimes::default();
            let v = times.time("scan", || is_locally_testable_direct(dfa, opts))?;
            report.record("direct", &times);
            report.push("direct", v);
        }
        (mode, _) => {
            let mut times = PhaseTimes::default();
            let s = times.time("generate", || generate_semigroup(dfa, args.budget_elements))?;
            report.semigroup_size = Some(s.len());
            let v = match mode {
                Mode::Ltt => {
                    let aperiodic = times.time("aperiodic", || is_aperiodic(&s));
                    if aperiodic.outcome {
                        times.time("identity", || check_identity_eq1(&s))
                    } else {
                        aperiodic
                    }
                }
                Mode::Lt => times.time("local", || is_locally_testable_semigroup(dfa, &s, opts))?,
            };
            report.record("semigroup", &times);
            report.push("semigroup", v);
        }
    }
    Ok(())
}

/// Writes `count` automata as text documents separated by `---` lines.
pub fn cmd_random(args: &RandomArgs, workers: Option<usize>, out: &mut dyn Write) -> Result<(), CliError> {
    if args.states == 0 || args.letters == 0 {
        return Err(CliError::Usage(
            "--states and --letters must be at least 1".into(),
        ));
    }
    let opts = options(workers);
    let mut rng = seeded(args.seed);
    for i in 0..args.count {
        let mut draws = 0u64;
        let dfa = loop {
            if draws == MAX_FILTER_DRAWS {
                return Err(CliError::Starvation { draws });
            }
            draws += 1;
            let dfa = random_dfa(&mut rng, args.states, args.letters);
            let keep = match args.filter {
                Filter::None => true,
                Filter::Ltt => ltt_core::ltt::is_locally_threshold_testable(&dfa, &opts)?.outcome,
                Filter::NotLtt => !ltt_core::ltt::is_locally_threshold_testable(&dfa, &opts)?.outcome,
            };
            if keep {
                break dfa;
            }
        };
        if i > 0 {
            out.write_all(b"---\n")?;
        }
        out.write_all(serialize(&dfa, None).as_bytes())?;
    }
    Ok(())
}

pub fn cmd_witness(args: &WitnessArgs) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let (bytes, digest) = read_input(&args.input)?;
    let mut report = RunReport::new("witness", digest);
    let dfa = load(&bytes, &args.input.input, args.input.complete_with_sink)?;
    if dfa.initial().is_none() || dfa.accepting().is_none() {
        return Err(CliError::Usage("witness requires initial/accepting".into()));
    }
    let mut times = PhaseTimes::default();
    let search = times.time("search", || {
        search_witness(&dfa, args.kmax, args.lmax, args.budget_elements)
    })?;
    report.record("profile", &times);
    // a failed search carries the conflict at the largest bounds, when affordable
    let conflict = match search.found {
        Some(_) => None,
        None => match is_kl_testable(&dfa, args.kmax, args.lmax, args.budget_elements) {
            Ok(v) => v.witness,
            Err(_) => None,
        },
    };
    report.verdicts.push(VerdictEntry {
        algorithm: "profile".into(),
        outcome: search.found.is_some(),
        reason: if search.found.is_some() {
            Reason::Holds
        } else {
            Reason::ProfileConflict
        },
        witness: conflict,
    });
    if search.found.is_none() && !search.skipped.is_empty() {
        let e = CliError::Core(ltt_core::Error::ProfileBudget {
            budget: args.budget_elements,
            k: search.skipped[0].0,
            l: search.skipped[0].1,
        });
        report.error = Some(ErrorReport {
            exit_code: e.exit_code(),
            message: e.to_string(),
        });
    }
    report.search = Some(SearchReport {
        kmax: args.kmax,
        lmax: args.lmax,
        found: search.found,
        skipped: search.skipped,
        one_sided: search.one_sided,
    });
    report.timing_ms.insert("total".into(), millis(started.elapsed()));
    Ok(report)
}

fn summarize(report: &RunReport, err: &mut dyn Write) -> io::Result<()> {
    for v in &report.verdicts {
        writeln!(err, "{}: {} ({:?})", v.algorithm, v.outcome, v.reason)?;
    }
    if let Some(search) = &report.search {
        match search.found {
            Some((k, l)) => writeln!(err, "language is {l}-threshold {k}-testable")?,
            None => writeln!(
                err,
                "no (k, l) within ({}, {}); this proves nothing",
                search.kmax, search.lmax
            )?,
        }
    }
    if report.agreement == Some(false) {
        writeln!(err, "algorithms disagree")?;
    }
    if let Some(e) = &report.error {
        writeln!(err, "error: {}", e.message)?;
    }
    Ok(())
}

/// Dispatches `cli`, writing JSON or automata to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Check(args) => cmd_check(args, cli.workers).map(Some),
        Command::Witness(args) => cmd_witness(args).map(Some),
        Command::Random(args) => cmd_random(args, cli.workers, out).map(|()| None),
    };
    match result {
        Ok(Some(report)) => {
            let _ = summarize(&report, err);
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            if writeln!(out, "{json}").is_err() {
                return exit::INPUT;
            }
            report.exit_code()
        }
        Ok(None) => exit::OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
