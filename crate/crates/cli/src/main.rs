//! `selfsim` — command-line front end for the radial self-similar profile
//! toolkit.
//!
//! Four subcommands cover the library's surface:
//!
//! * `exponents` — print and save the critical-exponent ladder for a
//!   dimension.
//! * `shoot`     — integrate a single profile from a center value or from a
//!   perturbation of the singular solution, saving the trajectory as CSV.
//! * `verify`    — run a named verification suite and save its report.
//! * `sweep`     — classify a grid of center values from a config file,
//!   optionally in parallel, saving the results as CSV.
//!
//! Every command writes a JSON run manifest next to its outputs — command
//! name, effective parameters, tool version, config digest, output list,
//! wall-clock time, and termination or error summaries — so a directory of
//! artifacts is self-describing. The manifest is written even when the
//! command fails.
//!
//! Exit codes: `0` success; `1` a verification check failed or an artifact
//! could not be written; `2` invalid input (bad flags, bad config, unknown
//! suite); `3` a shot exhausted its budget without classifying (outputs are
//! still written).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use selfsim::integrate::IntegrationOptions;
use selfsim::io;
use selfsim::shooting::{
    run_sweep, shoot_profile, shoot_singular, ShotClassification, ShotTag, TagClass,
};
use selfsim::verify::{run_suite, SuiteReport, SUITE_NAMES};
use selfsim::{exponent_table, Error, ExponentTable, Params, ProfileKind};

/// Environment variable consulted for the default output directory.
const OUT_DIR_ENV: &str = "SELFSIM_OUT";

const EXIT_OK: i32 = 0;
const EXIT_FAILURE: i32 = 1;
const EXIT_INVALID: i32 = 2;
const EXIT_UNDETERMINED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "selfsim",
    version,
    about = "Radial self-similar profiles of the semilinear heat equation",
    long_about = "Computes critical-exponent ladders, integrates forward/backward/steady \
                  radial profiles by shooting, verifies energy and asymptotic identities, \
                  and sweeps center-value grids. All artifacts (CSV, JSON) use shortest \
                  round-trip float formatting, so reruns are bit-identical."
)]
struct Cli {
    /// Directory for output files (default: $SELFSIM_OUT, then the current directory).
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the critical-exponent ladder for dimension n and save it as JSON.
    Exponents(ExponentsArgs),
    /// Integrate one profile and save its trajectory as CSV.
    Shoot(ShootArgs),
    /// Run a verification suite and save its report as JSON.
    Verify(VerifyArgs),
    /// Classify a grid of center values from a config file and save the sweep as CSV.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ExponentsArgs {
    /// Spatial dimension (any real n >= 1).
    #[arg(long)]
    n: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    /// Expanding self-similar profiles (global-solution time scaling).
    Forward,
    /// Shrinking self-similar profiles (blow-up time scaling).
    Backward,
    /// Steady radial states.
    Steady,
}

impl KindArg {
    fn to_kind(self) -> ProfileKind {
        match self {
            KindArg::Forward => ProfileKind::Forward,
            KindArg::Backward => ProfileKind::Backward,
            KindArg::Steady => ProfileKind::Steady,
        }
    }

    fn name(self) -> &'static str {
        match self {
            KindArg::Forward => "forward",
            KindArg::Backward => "backward",
            KindArg::Steady => "steady",
        }
    }
}

#[derive(Args)]
struct ShootArgs {
    /// Spatial dimension.
    #[arg(long)]
    n: f64,
    /// Nonlinearity power p > 1.
    #[arg(long)]
    p: f64,
    /// Profile kind.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Center value w(0) = a (regular shot). Exactly one of --a / --singular.
    #[arg(
        long,
        conflicts_with = "singular",
        required_unless_present = "singular"
    )]
    a: Option<f64>,
    /// Perturbation size off the singular solution (singular shot, started
    /// at --r-start in the scaled frame; 0 reproduces the singular solution
    /// itself). Exactly one of --a / --singular.
    #[arg(long)]
    singular: Option<f64>,
    /// Start radius. Regular shots refine this automatically from a series
    /// expansion at the center; singular shots start exactly here.
    #[arg(long, default_value_t = 1e-2)]
    r_start: f64,
    /// End radius of the integration span.
    #[arg(long, default_value_t = 50.0)]
    r_end: f64,
    /// Relative tolerance per step (absolute tolerance is 100x tighter).
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    /// Number of output samples (log-spaced in radius).
    #[arg(long, default_value_t = 1000)]
    n_output: usize,
    /// Also emit a gnuplot script for the trajectory CSV.
    #[arg(long)]
    gnuplot: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: identities, exponents, lemma21, dichotomy, uniqueness-probe, or all.
    suite: String,
}

#[derive(Args)]
struct SweepArgs {
    /// Path to a key = value config file (see `selfsim sweep --help`).
    ///
    /// Required keys: n, p, kind (forward|backward|steady), and a_grid or
    /// delta_grid (comma-separated list; sorted and deduplicated with a
    /// warning). Optional keys: r_start (delta sweeps only; default 0.01),
    /// r_end (default 50), rel_tol (default 1e-10), n_output (default 1000),
    /// parallelism (threads; default 1). Lines starting with # are comments.
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
}

/// Self-describing record of one CLI invocation, written next to the outputs.
#[derive(Serialize)]
struct RunManifest {
    /// Subcommand that ran.
    command: String,
    /// Tool version that produced the artifacts.
    version: String,
    /// Effective parameter set after defaults were applied.
    parameters: serde_json::Value,
    /// SHA-256 hex digest of the config file bytes (sweep only).
    config_digest: Option<String>,
    /// Files this run wrote, relative to the manifest's directory.
    outputs: Vec<String>,
    /// Elapsed wall-clock seconds. The only nondeterministic field; compare
    /// manifests with it cleared.
    wall_clock_seconds: f64,
    /// How the computation ended (classification tags, check counts).
    termination: Option<String>,
    /// Error message when the command failed; null on success.
    error: Option<String>,
}

fn main() {
    std::process::exit(run());
}

/// Prints a line to stdout, ignoring write failures: when the consumer closes
/// the pipe early (`selfsim ... | head`), the artifacts and exit code are
/// still the contract, so the command keeps running instead of panicking.
fn emit(text: impl std::fmt::Display) {
    use std::io::Write as _;
    let _ = writeln!(std::io::stdout(), "{text}");
}

/// Prints a line to stderr, ignoring write failures.
fn warn(text: impl std::fmt::Display) {
    use std::io::Write as _;
    let _ = writeln!(std::io::stderr(), "{text}");
}

fn run() -> i32 {
    let cli = Cli::parse();
    let out_dir = match resolve_out_dir(cli.out_dir) {
        Ok(dir) => dir,
        Err(msg) => {
            warn(format!("error: {msg}"));
            return EXIT_FAILURE;
        }
    };

    let started = Instant::now();
    let (stem, parameters, config_digest, body) = dispatch(&cli.command, &out_dir);

    let mut manifest = RunManifest {
        command: stem.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        parameters,
        config_digest,
        outputs: Vec::new(),
        wall_clock_seconds: 0.0,
        termination: None,
        error: None,
    };

    let code = match body {
        Ok(outcome) => {
            manifest.outputs = outcome.outputs;
            manifest.termination = outcome.termination;
            outcome.exit_code
        }
        Err(failure) => {
            manifest.outputs = failure.outputs;
            manifest.error = Some(failure.message.clone());
            warn(format!("error: {}", failure.message));
            failure.exit_code
        }
    };

    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    let manifest_name = format!("{stem}_manifest.json");
    if let Err(e) = write_json(&out_dir.join(&manifest_name), &manifest) {
        warn(format!("error: cannot write {manifest_name}: {e}"));
        return EXIT_FAILURE;
    }
    code
}

/// Successful command body: files written, how it ended, and the exit code
/// (0, or 3 for an undetermined shot).
struct Outcome {
    outputs: Vec<String>,
    termination: Option<String>,
    exit_code: i32,
}

/// Failed command body: message for stderr and the manifest, plus any files
/// that were written before the failure.
struct Failure {
    message: String,
    exit_code: i32,
    outputs: Vec<String>,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            exit_code: EXIT_INVALID,
            outputs: Vec::new(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            exit_code: EXIT_FAILURE,
            outputs: Vec::new(),
        }
    }
}

type BodyResult = std::result::Result<Outcome, Failure>;

/// Runs the chosen subcommand, returning the manifest stem, the effective
/// parameter set, the config digest (sweeps only), and the body result.
fn dispatch(
    command: &Command,
    out_dir: &Path,
) -> (&'static str, serde_json::Value, Option<String>, BodyResult) {
    match command {
        Command::Exponents(args) => {
            let params = json!({ "n": args.n });
            ("exponents", params, None, cmd_exponents(args, out_dir))
        }
        Command::Shoot(args) => {
            let params = json!({
                "n": args.n,
                "p": args.p,
                "kind": args.kind.name(),
                "a": args.a,
                "singular": args.singular,
                "r_start": args.r_start,
                "r_end": args.r_end,
                "rel_tol": args.rel_tol,
                "n_output": args.n_output,
                "gnuplot": args.gnuplot,
            });
            ("shoot", params, None, cmd_shoot(args, out_dir))
        }
        Command::Verify(args) => {
            let params = json!({ "suite": args.suite });
            ("verify", params, None, cmd_verify(args, out_dir))
        }
        Command::Sweep(args) => {
            let digest = std::fs::read(&args.config)
                .ok()
                .map(|bytes| format!("{:x}", Sha256::digest(&bytes)));
            // Parse up front so the manifest records the effective parameter
            // set (with defaults applied), not just the config path.
            let parsed = std::fs::read_to_string(&args.config)
                .map_err(|e| {
                    Failure::invalid(format!("cannot read config {}: {e}", args.config.display()))
                })
                .and_then(|text| parse_config(&text));
            match parsed {
                Ok(config) => {
                    let params = sweep_parameters(&config, &args.config);
                    ("sweep", params, digest, cmd_sweep(config, out_dir))
                }
                Err(failure) => {
                    let params = json!({ "config": args.config.display().to_string() });
                    ("sweep", params, digest, Err(failure))
                }
            }
        }
    }
}

fn resolve_out_dir(flag: Option<PathBuf>) -> std::result::Result<PathBuf, String> {
    let dir = flag
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .map_err(|e| format!("cannot create output directory {}: {e}", dir.display()))?;
    Ok(dir)
}

fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    std::fs::write(path, text)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    text.push('\n');
    write_text(path, &text)
}

/// Maps a library error to the invalid-input exit code: every error the
/// library returns for CLI-supplied values is a precondition violation.
fn invalid(err: Error) -> Failure {
    Failure::invalid(err.to_string())
}

// ---------------------------------------------------------------------------
// exponents

fn format_exponent(e: selfsim::exponents::Exponent) -> String {
    match e.finite() {
        Some(v) => format!("{v}"),
        None => "inf".to_string(),
    }
}

fn print_exponent_table(table: &ExponentTable) {
    emit(format!("critical exponents at n = {}", table.n));
    let rows = [
        ("p_F", table.fujita, "Fujita"),
        (
            "p_sg",
            table.singular,
            "singular steady state exists above this",
        ),
        ("p_S", table.sobolev, "Sobolev"),
        ("p_JL", table.joseph_lundgren, "Joseph-Lundgren"),
        (
            "p_JL_star",
            table.joseph_lundgren_dual,
            "dual Joseph-Lundgren",
        ),
        ("p_L", table.lepin, "Lepin"),
    ];
    for (name, value, note) in rows {
        emit(format!("  {name:<9} {:<22} {note}", format_exponent(value)));
    }
}

fn cmd_exponents(args: &ExponentsArgs, out_dir: &Path) -> BodyResult {
    let table = exponent_table(args.n).map_err(invalid)?;
    print_exponent_table(&table);

    let file = "exponents.json";
    write_json(&out_dir.join(file), &table)
        .map_err(|e| Failure::io(format!("cannot write {file}: {e}")))?;

    Ok(Outcome {
        outputs: vec![file.to_string()],
        termination: Some("exponent ladder computed".to_string()),
        exit_code: EXIT_OK,
    })
}

// ---------------------------------------------------------------------------
// shoot

/// One-line human summary of a shot classification.
fn describe_classification(class: &ShotClassification) -> String {
    let mut line = match class.tag {
        ShotTag::PositiveDecaying => "outcome: positive_decaying".to_string(),
        ShotTag::HitsZero { radius } => format!("outcome: hits_zero at r = {radius}"),
        ShotTag::Blowup { radius } => format!("outcome: blowup at r = {radius}"),
        ShotTag::Undetermined => "outcome: undetermined (step budget exhausted)".to_string(),
    };
    if class.constant_profile {
        line.push_str("\nprofile is the constant kappa state");
    }
    if let Some(ell) = class.ell {
        let conv = if class.ell_converged {
            "converged"
        } else {
            "not converged"
        };
        let _ = write!(line, "\ntail limit ell = {ell} ({conv})");
    }
    let t = &class.terminal;
    let _ = write!(
        line,
        "\nterminal state: r = {}, value = {}, slope = {}",
        t.coord, t.value, t.slope
    );
    line
}

fn cmd_shoot(args: &ShootArgs, out_dir: &Path) -> BodyResult {
    let params = Params::new(args.n, args.p).map_err(invalid)?;
    let kind = args.kind.to_kind();

    let mut options = IntegrationOptions::new(args.r_start, args.r_end);
    options.rel_tol = args.rel_tol;
    options.abs_tol = args.rel_tol * 1e-2;
    options.n_output = args.n_output;
    options.validate().map_err(invalid)?;

    let (trajectory, classification) = match (args.a, args.singular) {
        (Some(a), None) => shoot_profile(kind, &params, a, &options).map_err(invalid)?,
        (None, Some(delta)) => shoot_singular(kind, &params, delta, &options).map_err(invalid)?,
        // clap enforces exactly one of the two flags.
        _ => unreachable!("argument parsing guarantees exactly one of --a / --singular"),
    };

    emit(describe_classification(&classification));

    let mut outputs = Vec::new();
    let csv_name = "shoot.csv";
    write_text(&out_dir.join(csv_name), &io::trajectory_csv(&trajectory))
        .map_err(|e| Failure::io(format!("cannot write {csv_name}: {e}")))?;
    outputs.push(csv_name.to_string());

    if args.gnuplot {
        let plt_name = "shoot.plt";
        let title = format!(
            "{} profile, n = {}, p = {}",
            args.kind.name(),
            args.n,
            args.p
        );
        write_text(
            &out_dir.join(plt_name),
            &io::gnuplot_script(csv_name, &title),
        )
        .map_err(|e| Failure::io(format!("cannot write {plt_name}: {e}")))?;
        outputs.push(plt_name.to_string());
    }

    let termination = match classification.tag {
        ShotTag::PositiveDecaying => "positive_decaying".to_string(),
        ShotTag::HitsZero { radius } => format!("hits_zero at r = {radius}"),
        ShotTag::Blowup { radius } => format!("blowup at r = {radius}"),
        ShotTag::Undetermined => "undetermined: step budget exhausted".to_string(),
    };
    let exit_code = if classification.tag.class() == TagClass::Undetermined {
        EXIT_UNDETERMINED
    } else {
        EXIT_OK
    };

    Ok(Outcome {
        outputs,
        termination: Some(termination),
        exit_code,
    })
}

// ---------------------------------------------------------------------------
// verify

fn print_suite_report(report: &SuiteReport) {
    for check in &report.checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        emit(format!(
            "[{status}] {} — measured {:.6e} (required {} {:.3e})",
            check.name, check.measured, check.comparison, check.threshold
        ));
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    emit(format!(
        "suite {:?}: {} checks, {} failed",
        report.suite,
        report.checks.len(),
        failed
    ));
}

fn cmd_verify(args: &VerifyArgs, out_dir: &Path) -> BodyResult {
    let report = run_suite(&args.suite).map_err(|e| match e {
        Error::UnknownSuite(_) => {
            Failure::invalid(format!("{e}\navailable suites: {}", SUITE_NAMES.join(", ")))
        }
        other => Failure::io(other.to_string()),
    })?;

    print_suite_report(&report);

    let file = "verify_report.json";
    write_json(&out_dir.join(file), &report)
        .map_err(|e| Failure::io(format!("cannot write {file}: {e}")))?;

    let failed = report.checks.iter().filter(|c| !c.passed).count();
    let termination = format!("{} checks, {} failed", report.checks.len(), failed);
    let exit_code = if report.passed { EXIT_OK } else { EXIT_FAILURE };

    Ok(Outcome {
        outputs: vec![file.to_string()],
        termination: Some(termination),
        exit_code,
    })
}

// ---------------------------------------------------------------------------
// sweep

/// Parsed and validated sweep configuration.
struct SweepConfig {
    n: f64,
    p: f64,
    kind: KindArg,
    /// Center values (`a_grid`) or perturbation sizes (`delta_grid`).
    grid: Vec<f64>,
    /// Whether `grid` holds perturbations of the singular solution.
    singular: bool,
    r_start: f64,
    r_end: f64,
    rel_tol: f64,
    n_output: usize,
    parallelism: usize,
}

fn config_error(line: usize, key: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::invalid(format!("config line {line}, key {key:?}: {msg}"))
}

fn parse_config(text: &str) -> std::result::Result<SweepConfig, Failure> {
    let mut seen: Vec<(String, usize, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let Some((key, value)) = stripped.split_once('=') else {
            return Err(Failure::invalid(format!(
                "config line {line}: expected `key = value`, got {stripped:?}"
            )));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if let Some((_, first_line, _)) = seen.iter().find(|(k, _, _)| *k == key) {
            return Err(config_error(
                line,
                &key,
                format!("duplicate key (first set on line {first_line})"),
            ));
        }
        seen.push((key, line, value));
    }

    let lookup = |key: &str| {
        seen.iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, l, v)| (*l, v.as_str()))
    };

    let parse_f64 = |key: &str| -> std::result::Result<Option<(usize, f64)>, Failure> {
        match lookup(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<f64>().map(|x| Some((line, x))).map_err(|e| {
                config_error(line, key, format!("cannot parse {v:?} as a number ({e})"))
            }),
        }
    };

    let require_f64 = |key: &str| -> std::result::Result<f64, Failure> {
        parse_f64(key)?
            .map(|(_, x)| x)
            .ok_or_else(|| Failure::invalid(format!("config is missing required key {key:?}")))
    };

    let n = require_f64("n")?;
    let p = require_f64("p")?;

    let kind = match lookup("kind") {
        None => return Err(Failure::invalid("config is missing required key \"kind\"")),
        Some((line, v)) => match v {
            "forward" => KindArg::Forward,
            "backward" => KindArg::Backward,
            "steady" => KindArg::Steady,
            other => {
                return Err(config_error(
                    line,
                    "kind",
                    format!("expected forward, backward, or steady, got {other:?}"),
                ))
            }
        },
    };

    let parse_grid = |key: &str| -> std::result::Result<Option<Vec<f64>>, Failure> {
        let Some((line, v)) = lookup(key) else {
            return Ok(None);
        };
        let mut grid = Vec::new();
        for part in v.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let x = part.parse::<f64>().map_err(|e| {
                config_error(line, key, format!("cannot parse grid entry {part:?} ({e})"))
            })?;
            if !x.is_finite() {
                return Err(config_error(
                    line,
                    key,
                    format!("grid entry {part:?} is not finite"),
                ));
            }
            grid.push(x);
        }
        if grid.is_empty() {
            return Err(config_error(line, key, "grid is empty"));
        }
        Ok(Some(grid))
    };

    let a_grid = parse_grid("a_grid")?;
    let delta_grid = parse_grid("delta_grid")?;
    let (grid, singular) = match (a_grid, delta_grid) {
        (Some(_), Some(_)) => {
            return Err(Failure::invalid(
                "config sets both \"a_grid\" and \"delta_grid\"; choose one",
            ))
        }
        (Some(g), None) => (g, false),
        (None, Some(g)) => (g, true),
        (None, None) => {
            return Err(Failure::invalid(
                "config is missing a grid: set \"a_grid\" or \"delta_grid\"",
            ))
        }
    };

    let r_start = parse_f64("r_start")?.map(|(_, x)| x).unwrap_or(1e-2);
    let r_end = parse_f64("r_end")?.map(|(_, x)| x).unwrap_or(50.0);
    let rel_tol = parse_f64("rel_tol")?.map(|(_, x)| x).unwrap_or(1e-10);

    let n_output = match lookup("n_output") {
        None => 1000,
        Some((line, v)) => v
            .parse::<usize>()
            .map_err(|e| config_error(line, "n_output", format!("cannot parse {v:?} ({e})")))?,
    };
    let parallelism = match lookup("parallelism") {
        None => 1,
        Some((line, v)) => {
            let k = v.parse::<usize>().map_err(|e| {
                config_error(line, "parallelism", format!("cannot parse {v:?} ({e})"))
            })?;
            if k == 0 {
                return Err(config_error(line, "parallelism", "must be at least 1"));
            }
            k
        }
    };

    const KNOWN: [&str; 10] = [
        "n",
        "p",
        "kind",
        "a_grid",
        "delta_grid",
        "r_start",
        "r_end",
        "rel_tol",
        "n_output",
        "parallelism",
    ];
    for (key, line, _) in &seen {
        if !KNOWN.contains(&key.as_str()) {
            return Err(config_error(*line, key, "unknown key"));
        }
    }

    Ok(SweepConfig {
        n,
        p,
        kind,
        grid,
        singular,
        r_start,
        r_end,
        rel_tol,
        n_output,
        parallelism,
    })
}

/// Sorts the grid and removes exact duplicates, warning on stderr about each
/// removed value. The library requires a strictly increasing grid.
fn normalize_grid(mut grid: Vec<f64>) -> Vec<f64> {
    grid.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(grid.len());
    for x in grid {
        if out.last() == Some(&x) {
            warn(format!("warning: duplicate grid value {x} removed"));
        } else {
            out.push(x);
        }
    }
    out
}

/// Sweeps perturbation sizes of the singular solution over a grid, mirroring
/// the center-value sweep: grid-ordered entries plus brackets between
/// adjacent entries whose outcome class differs.
fn run_singular_sweep(
    kind: ProfileKind,
    params: &Params,
    grid: &[f64],
    options: &IntegrationOptions,
) -> selfsim::Result<selfsim::shooting::SweepResult> {
    let mut entries = Vec::with_capacity(grid.len());
    for &delta in grid {
        let (_, classification) = shoot_singular(kind, params, delta, options)?;
        entries.push(selfsim::shooting::SweepEntry {
            a: delta,
            classification,
        });
    }
    let brackets = entries
        .windows(2)
        .filter(|w| w[0].classification.tag.class() != w[1].classification.tag.class())
        .map(|w| (w[0].a, w[1].a))
        .collect();
    Ok(selfsim::shooting::SweepResult { entries, brackets })
}

fn cmd_sweep(config: SweepConfig, out_dir: &Path) -> BodyResult {
    let params = Params::new(config.n, config.p).map_err(invalid)?;
    let grid = normalize_grid(config.grid);

    let mut options = IntegrationOptions::new(config.r_start, config.r_end);
    options.rel_tol = config.rel_tol;
    options.abs_tol = config.rel_tol * 1e-2;
    options.n_output = config.n_output;
    options.validate().map_err(invalid)?;

    let kind = config.kind.to_kind();
    let sweep = if config.singular {
        run_singular_sweep(kind, &params, &grid, &options).map_err(invalid)?
    } else if config.parallelism > 1 {
        let pool = rayon_pool(config.parallelism)
            .map_err(|e| Failure::io(format!("cannot build thread pool: {e}")))?;
        pool.install(|| run_sweep(kind, &params, &grid, &options, true))
            .map_err(invalid)?
    } else {
        run_sweep(kind, &params, &grid, &options, false).map_err(invalid)?
    };

    let mut counts: Vec<(TagClass, usize)> = Vec::new();
    for entry in &sweep.entries {
        let class = entry.classification.tag.class();
        match counts.iter_mut().find(|(c, _)| *c == class) {
            Some((_, k)) => *k += 1,
            None => counts.push((class, 1)),
        }
    }
    let summary = counts
        .iter()
        .map(|(c, k)| format!("{k} {c}"))
        .collect::<Vec<_>>()
        .join(", ");
    emit(format!(
        "sweep of {} values: {summary}",
        sweep.entries.len()
    ));
    for (lo, hi) in &sweep.brackets {
        emit(format!("outcome changes between {lo} and {hi}"));
    }

    let file = "sweep.csv";
    write_text(&out_dir.join(file), &io::sweep_csv(&sweep))
        .map_err(|e| Failure::io(format!("cannot write {file}: {e}")))?;

    Ok(Outcome {
        outputs: vec![file.to_string()],
        termination: Some(summary),
        exit_code: EXIT_OK,
    })
}

fn rayon_pool(
    threads: usize,
) -> std::result::Result<rayon::ThreadPool, rayon::ThreadPoolBuildError> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build()
}

/// Effective sweep parameters for the manifest: the config values with all
/// defaults applied, plus the config path itself.
fn sweep_parameters(config: &SweepConfig, path: &Path) -> serde_json::Value {
    json!({
        "config": path.display().to_string(),
        "n": config.n,
        "p": config.p,
        "kind": config.kind.name(),
        "grid_key": if config.singular { "delta_grid" } else { "a_grid" },
        "grid": config.grid,
        "r_start": config.r_start,
        "r_end": config.r_end,
        "rel_tol": config.rel_tol,
        "n_output": config.n_output,
        "parallelism": config.parallelism,
    })
}
