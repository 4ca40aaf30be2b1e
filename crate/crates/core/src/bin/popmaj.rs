//! Command-line front end: single trials, experiment sweeps, bounded
//! exhaustive verification, and state-census audits.
//!
//! Exit codes: 0 success, 1 incorrect stabilization detected, 2 overflow
//! (interaction budget or verifier state space), 3 invalid arguments.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use popmaj::engine::{self, Input, Params};
use popmaj::harness::{
    self, csv_string, default_max_interactions, InitKind, NumAPolicy, SweepSpec, TraceMetrics,
};
use popmaj::verifier::{self, VerifierCaps, VerifierError};

const EXIT_INCORRECT: u8 = 1;
const EXIT_OVERFLOW: u8 = 2;
const EXIT_BAD_ARGS: u8 = 3;

#[derive(Parser)]
#[command(
    name = "popmaj",
    about = "Silent self-stabilizing exact-majority protocol: simulator, verifier, experiment harness",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single trial and print its metrics.
    Run(RunArgs),
    /// Run a seeded experiment sweep and emit the result table.
    Sweep(SweepArgs),
    /// Exhaustively verify stabilization on a tiny population with capped
    /// counters.
    Verify(VerifyArgs),
    /// Count distinct agent states observed across a sweep, per n.
    Census(CensusArgs),
}

/// `key=value` config file; command-line flags override file entries.
#[derive(Args, Clone)]
struct ConfigFile {
    /// Plain key=value file with the long option names as keys.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigFile,
    /// Population size.
    #[arg(long)]
    n: Option<u32>,
    /// Number of A-opinion agents.
    #[arg(long)]
    num_a: Option<u32>,
    /// Initial configuration kind, or `file:PATH` for a snapshot.
    #[arg(long)]
    init: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Ranking silence-time constant (sets timer_max = 7(t_rank+4)).
    #[arg(long)]
    t_rank: Option<u32>,
    /// Interaction budget; default 200 n^2 ln(n+1).
    #[arg(long)]
    max_interactions: Option<u64>,
    /// Output format on stdout: csv or json.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigFile,
    /// Comma-separated population sizes.
    #[arg(long)]
    n: Option<String>,
    /// Trials per (n, kind, num_a) cell.
    #[arg(long)]
    trials: Option<u32>,
    /// Base seed; per-trial seeds derive from (seed, n, kind, trial).
    #[arg(long)]
    seed: Option<u64>,
    /// `all` or a comma-separated list of kinds.
    #[arg(long)]
    kinds: Option<String>,
    /// `auto`, `all`, `edges`, or `list:v1,v2,...`.
    #[arg(long)]
    num_a_policy: Option<String>,
    #[arg(long)]
    t_rank: Option<u32>,
    #[arg(long)]
    max_interactions: Option<u64>,
    /// Worker threads; 0 = one per core.
    #[arg(long)]
    workers: Option<usize>,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Table format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Also write an aggregate summary (JSON) here.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    config: ConfigFile,
    #[arg(long)]
    n: Option<u32>,
    /// Input string over {A,B}, e.g. AAB.
    #[arg(long)]
    inputs: Option<String>,
    #[arg(long)]
    cap_reset: Option<u32>,
    #[arg(long)]
    cap_wait: Option<u32>,
    #[arg(long)]
    cap_timer: Option<u32>,
    /// Write the full report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    config: ConfigFile,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    num_a_policy: Option<String>,
    #[arg(long)]
    t_rank: Option<u32>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version requests are not argument errors
            use clap::error::ErrorKind;
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_BAD_ARGS),
            };
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Census(args) => cmd_census(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_BAD_ARGS)
        }
    }
}

type CliResult = Result<ExitCode, Box<dyn std::error::Error>>;

/// Parsed key=value config file. `#` starts a comment.
struct FileValues(BTreeMap<String, String>);

impl FileValues {
    fn load(path: Option<&Path>) -> Result<FileValues, Box<dyn std::error::Error>> {
        let mut map = BTreeMap::new();
        if let Some(path) = path {
            for (i, line) in fs::read_to_string(path)?.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), i + 1))?;
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(FileValues(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Box<dyn std::error::Error>>
    where
        T::Err: std::fmt::Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| format!("config key {key}={raw}: {e}").into()),
        }
    }
}

/// CLI value, else config-file value, else default.
fn resolve<T: FromStr + Clone>(
    cli: Option<T>,
    file: &FileValues,
    key: &str,
    default: Option<T>,
) -> Result<T, Box<dyn std::error::Error>>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = cli {
        return Ok(v);
    }
    if let Some(v) = file.get::<T>(key)? {
        return Ok(v);
    }
    default.ok_or_else(|| format!("missing required option --{key}").into())
}

fn parse_inputs(s: &str) -> Result<Vec<Input>, String> {
    s.chars()
        .map(|c| match c {
            'A' => Ok(Input::A),
            'B' => Ok(Input::B),
            other => Err(format!("invalid input symbol {other:?}, expected A or B")),
        })
        .collect()
}

fn parse_n_list(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|tok| tok.trim().parse::<u32>().map_err(|e| format!("bad n {tok:?}: {e}")))
        .collect()
}

fn parse_kinds(s: &str) -> Result<Vec<InitKind>, String> {
    if s == "all" {
        return Ok(InitKind::generated());
    }
    s.split(',')
        .map(|tok| InitKind::parse(tok.trim()).map_err(|e| e.to_string()))
        .collect()
}

fn parse_num_a_policy(s: &str) -> Result<NumAPolicy, String> {
    match s {
        "auto" => Ok(NumAPolicy::Auto),
        "all" => Ok(NumAPolicy::All),
        "edges" => Ok(NumAPolicy::Edges),
        other => match other.strip_prefix("list:") {
            Some(list) => Ok(NumAPolicy::Explicit(
                list.split(',')
                    .map(|tok| tok.trim().parse::<u32>().map_err(|e| e.to_string()))
                    .collect::<Result<Vec<u32>, String>>()?,
            )),
            None => Err(format!("bad num-a policy {other:?}")),
        },
    }
}

fn emit_rows(rows: &[TraceMetrics], format: &str, out: Option<&Path>) -> CliResult {
    let body = match format {
        "csv" => csv_string(rows),
        "json" => format!("{}\n", serde_json::to_string_pretty(rows)?),
        other => return Err(format!("unknown format {other:?}, expected csv or json").into()),
    };
    match out {
        Some(path) => fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn table_exit_code(rows: &[TraceMetrics]) -> ExitCode {
    if rows.iter().any(|m| !m.correct) {
        ExitCode::from(EXIT_INCORRECT)
    } else if rows.iter().any(|m| m.interactions.is_none()) {
        ExitCode::from(EXIT_OVERFLOW)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_run(args: RunArgs) -> CliResult {
    let file = FileValues::load(args.config.config.as_deref())?;
    let n: u32 = resolve(args.n, &file, "n", None)?;
    let num_a: u32 = resolve(args.num_a, &file, "num-a", Some(n.div_ceil(2)))?;
    let init_raw: String = resolve(args.init, &file, "init", Some("all_unsettled".into()))?;
    let kind = InitKind::parse(&init_raw)?;
    let seed: u64 = resolve(args.seed, &file, "seed", Some(0))?;
    let t_rank: u32 = resolve(args.t_rank, &file, "t-rank", Some(engine::DEFAULT_T_RANK))?;
    let max = resolve(
        args.max_interactions,
        &file,
        "max-interactions",
        Some(default_max_interactions(n)),
    )?;
    let out: String = resolve(args.out, &file, "out", Some("csv".into()))?;

    let params = Params::new(n, t_rank, seed)?;
    let metrics = harness::run_trial(&kind, n, num_a, seed, &params, max)?;
    let code = table_exit_code(std::slice::from_ref(&metrics));
    emit_rows(std::slice::from_ref(&metrics), &out, None)?;
    Ok(code)
}

fn cmd_sweep(args: SweepArgs) -> CliResult {
    let file = FileValues::load(args.config.config.as_deref())?;
    let n_raw: String = resolve(args.n, &file, "n", None)?;
    let trials: u32 = resolve(args.trials, &file, "trials", Some(20))?;
    let seed: u64 = resolve(args.seed, &file, "seed", Some(0))?;
    let kinds_raw: String = resolve(args.kinds, &file, "kinds", Some("all".into()))?;
    let policy_raw: String =
        resolve(args.num_a_policy, &file, "num-a-policy", Some("auto".into()))?;
    let t_rank: u32 = resolve(args.t_rank, &file, "t-rank", Some(engine::DEFAULT_T_RANK))?;
    let workers: usize = resolve(args.workers, &file, "workers", Some(0))?;
    let format: String = resolve(args.format, &file, "format", Some("csv".into()))?;

    let mut spec = SweepSpec::new(parse_n_list(&n_raw)?, trials, seed);
    spec.kinds = parse_kinds(&kinds_raw)?;
    spec.num_a_policy = parse_num_a_policy(&policy_raw)?;
    spec.t_rank = t_rank;
    spec.workers = workers;
    spec.max_interactions = match args.max_interactions {
        Some(v) => Some(v),
        None => file.get::<u64>("max-interactions")?,
    };

    let rows = harness::sweep(&spec)?;
    if let Some(path) = &args.summary {
        let summary = harness::summarize(&rows, None);
        fs::write(path, format!("{}\n", serde_json::to_string_pretty(&summary)?))?;
    }
    let code = table_exit_code(&rows);
    emit_rows(&rows, &format, args.out.as_deref())?;
    Ok(code)
}

fn cmd_verify(args: VerifyArgs) -> CliResult {
    let file = FileValues::load(args.config.config.as_deref())?;
    let n: u32 = resolve(args.n, &file, "n", None)?;
    let inputs_raw: String = resolve(args.inputs, &file, "inputs", None)?;
    let inputs = parse_inputs(&inputs_raw)?;
    let cap_reset: u32 = resolve(args.cap_reset, &file, "cap-reset", Some(1))?;
    let cap_wait: u32 = resolve(args.cap_wait, &file, "cap-wait", Some(1))?;
    let cap_timer: u32 = resolve(args.cap_timer, &file, "cap-timer", Some(1))?;

    let caps = VerifierCaps::new(cap_reset, cap_wait, cap_timer);
    let report = match verifier::check_stabilization(n, &inputs, &caps) {
        Ok(report) => report,
        Err(err @ VerifierError::StateSpaceTooLarge { .. }) => {
            eprintln!("error: {err}");
            return Ok(ExitCode::from(EXIT_OVERFLOW));
        }
        Err(err) => return Err(err.into()),
    };

    let mut text = Vec::new();
    verifier::write_report(&report, &mut text)?;
    let text = String::from_utf8(text).expect("report is utf-8");
    match &args.report {
        Some(path) => {
            fs::write(path, &text)?;
            println!(
                "n={} inputs={} verified={} (report: {})",
                n,
                inputs_raw,
                report.all_terminal_silent_correct,
                path.display()
            );
        }
        None => print!("{text}"),
    }
    Ok(if report.all_terminal_silent_correct {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INCORRECT)
    })
}

fn cmd_census(args: CensusArgs) -> CliResult {
    let file = FileValues::load(args.config.config.as_deref())?;
    let n_raw: String = resolve(args.n, &file, "n", None)?;
    let trials: u32 = resolve(args.trials, &file, "trials", Some(20))?;
    let seed: u64 = resolve(args.seed, &file, "seed", Some(0))?;
    let policy_raw: String =
        resolve(args.num_a_policy, &file, "num-a-policy", Some("auto".into()))?;
    let t_rank: u32 = resolve(args.t_rank, &file, "t-rank", Some(engine::DEFAULT_T_RANK))?;
    let workers: usize = resolve(args.workers, &file, "workers", Some(0))?;

    let mut spec = SweepSpec::new(parse_n_list(&n_raw)?, trials, seed);
    spec.num_a_policy = parse_num_a_policy(&policy_raw)?;
    spec.t_rank = t_rank;
    spec.workers = workers;

    let (rows, census) = harness::sweep_with_census(&spec)?;
    let mut body = String::from("n,distinct_states\n");
    for (n, count) in &census {
        body.push_str(&format!("{n},{count}\n"));
    }
    match &args.out {
        Some(path) => fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(table_exit_code(&rows))
}
