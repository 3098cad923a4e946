//! Subcommands and the exit-code contract.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use darts_core::{dartboard_sweep, g_curve, AimStatus, Engine, EvalSpec, GCurve};
use thiserror::Error;

use crate::expr::{dart_node, parse_dart, parse_node, parse_payoff, payoff_node};
use crate::output::{self, Chart, Manifest};
use crate::reproduce::{self, Case};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCREASE: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

/// Bad input discovered after argument parsing. Maps to [`EXIT_USAGE`].
#[derive(Debug, Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

#[derive(Debug, Parser)]
#[command(name = "darts", version, about = "Best-aim expected payoffs as the throwing distance grows", args_override_self = true)]
pub struct Cli {
    /// `key = value` file whose entries act as flags; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Best-aim value g(d) over a grid of distances.
    GCurve(GCurveArgs),
    /// Uniform disc of radius r thrown at the standard board.
    DartboardSweep(SweepArgs),
    /// Run a named experiment and print PASS/FAIL per check.
    Reproduce {
        #[arg(value_enum)]
        case: Case,
    },
}

pub const SUBCOMMANDS: [&str; 3] = ["g-curve", "dartboard-sweep", "reproduce"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Auto,
    Exact,
    Quad,
    Mc,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Auto => Engine::Auto,
            EngineArg::Exact => Engine::Exact,
            EngineArg::Quad => Engine::Quad,
            EngineArg::Mc => Engine::MonteCarlo,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Absolute tolerance of each expectation.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Evaluation budget per expectation.
    #[arg(long, default_value_t = 1 << 18)]
    pub max_evals: usize,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG chart destination.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Worker cap. Evaluation is single-threaded, so any value behaves as 1.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GCurveArgs {
    #[arg(long)]
    pub dart: String,
    #[arg(long)]
    pub payoff: String,
    #[arg(long)]
    pub d_min: f64,
    #[arg(long)]
    pub d_max: f64,
    /// Number of intervals; the grid has steps + 1 points.
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    pub engine: EngineArg,
    /// Seed for Monte Carlo and random restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exit with status 3 when g increases anywhere on the grid.
    #[arg(long)]
    pub expect_monotone: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1.0)]
    pub r_min: f64,
    #[arg(long, default_value_t = 170.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 169)]
    pub steps: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Files and text produced by a run, plus its exit code.
#[derive(Debug)]
pub struct RunOutput {
    pub csv: String,
    pub svg: Option<String>,
    pub code: u8,
}

fn grid(lo: f64, hi: f64, steps: usize, what: &str) -> Result<Vec<f64>> {
    if !(lo > 0.0 && lo.is_finite() && hi.is_finite()) {
        return usage(format!("{what} range must be positive and finite"));
    }
    if steps == 0 {
        return if hi == lo { Ok(vec![lo]) } else { usage("--steps 0 needs equal endpoints") };
    }
    if hi <= lo {
        return usage(format!("{what} maximum must exceed the minimum"));
    }
    Ok((0..=steps).map(|i| if i == steps { hi } else { lo + (hi - lo) * i as f64 / steps as f64 }).collect())
}

fn eval_spec(engine: Engine, seed: u64, c: &CommonArgs) -> Result<EvalSpec> {
    let spec = EvalSpec { engine, abs_tol: c.tol, seed, max_evals: c.max_evals };
    if let Err(e) = spec.validate() {
        return usage(e.to_string());
    }
    Ok(spec)
}

fn engine_entry(spec: &EvalSpec, threads: usize) -> String {
    format!("{} tol={} max_evals={} threads=1 (requested {threads})", spec.engine.name(), spec.abs_tol, spec.max_evals)
}

fn exit_code(curve: &GCurve, expect_monotone: bool) -> u8 {
    if curve.points.iter().any(|p| p.status == AimStatus::Budget) {
        EXIT_BUDGET
    } else if expect_monotone && !curve.increases.is_empty() {
        EXIT_INCREASE
    } else {
        EXIT_OK
    }
}

/// Chart series taken from CSV columns, so every label is CSV text.
fn series(rows: &[Vec<String>], col: usize) -> Vec<output::Tick> {
    rows.iter().map(|r| (r[col].parse().unwrap_or(f64::NAN), r[col].clone())).collect()
}

fn finish(mut manifest: Manifest, header: &[&str], rows: Vec<Vec<String>>, chart: Option<Chart>, code: u8) -> RunOutput {
    let svg = chart.map(|c| output::svg(&c));
    if let Some(s) = &svg {
        manifest.digests.push(("svg".into(), output::sha256_hex(s.as_bytes())));
    }
    RunOutput { csv: output::csv(&manifest, header, &rows), svg, code }
}

pub fn g_curve_run(args: &GCurveArgs, command: &str) -> Result<RunOutput> {
    let dart = parse_dart(&args.dart).map_err(|e| UsageError(format!("--dart: {e}")))?;
    let payoff = parse_payoff(&args.payoff).map_err(|e| UsageError(format!("--payoff: {e}")))?;
    if let Some(pd) = payoff.dim() {
        if pd != dart.dim() {
            return usage(format!("dart is {}-dimensional but the payoff is {pd}-dimensional", dart.dim()));
        }
    }
    let d_grid = grid(args.d_min, args.d_max, args.steps, "distance")?;
    let spec = eval_spec(args.engine.into(), args.seed, &args.common)?;
    let curve = g_curve(&dart, &payoff, &d_grid, &spec)?;

    let payoff_text = match payoff_node(&payoff) {
        Some(n) => n.to_string(),
        None => parse_node(&args.payoff).map(|n| n.to_string()).unwrap_or_else(|_| args.payoff.clone()),
    };
    let manifest = Manifest {
        command: command.to_string(),
        seed: Some(args.seed),
        engine: engine_entry(&spec, args.common.threads),
        entries: vec![
            ("dart".into(), dart_node(&dart).to_string()),
            ("payoff".into(), payoff_text),
            ("grid".into(), format!("{} points from {} to {}", d_grid.len(), args.d_min, args.d_max)),
            ("increases".into(), output::increases_entry(&curve.increases)),
        ],
        digests: Vec::new(),
    };
    let (header, rows) = output::g_curve_rows(&curve, dart.dim());
    let chart = args.common.svg.as_ref().map(|_| Chart {
        title: "best-aim value against distance",
        x_label: "d",
        y_label: "g",
        x: series(&rows, 0),
        y: series(&rows, 1),
        marked: output::increase_marks(&curve.d_grid, &curve.increases),
    });
    Ok(finish(manifest, &header, rows, chart, exit_code(&curve, args.expect_monotone)))
}

pub fn sweep_run(args: &SweepArgs, command: &str) -> Result<RunOutput> {
    let r_grid = grid(args.r_min, args.r_max, args.steps, "radius")?;
    if args.r_max > 400.0 {
        return usage("radius must be at most 400 mm");
    }
    let spec = eval_spec(Engine::Auto, 0, &args.common)?;
    let sweep = dartboard_sweep(&r_grid, &spec)?;
    let jumps = if sweep.aim_jumps.is_empty() {
        "none".to_string()
    } else {
        sweep.aim_jumps.iter().map(|(a, b)| format!("({a},{b})")).collect::<Vec<_>>().join(";")
    };
    let manifest = Manifest {
        command: command.to_string(),
        seed: None,
        engine: engine_entry(&spec, args.common.threads),
        entries: vec![
            ("dart".into(), "disc scaled by radius_mm".into()),
            ("payoff".into(), "dartboard".into()),
            ("grid".into(), format!("{} radii from {} to {} mm", r_grid.len(), args.r_min, args.r_max)),
            ("boundaries".into(), "wires have zero width; sector_label is the sector containing the aim".into()),
            ("increases".into(), output::increases_entry(&sweep.curve.increases)),
            ("aim jumps".into(), jumps),
        ],
        digests: Vec::new(),
    };
    let (header, rows) = output::sweep_rows(&sweep);
    let chart = args.common.svg.as_ref().map(|_| Chart {
        title: "expected score of the best aim against disc radius",
        x_label: "radius (mm)",
        y_label: "best expected score",
        x: series(&rows, 0),
        y: series(&rows, 1),
        marked: output::increase_marks(&sweep.curve.d_grid, &sweep.curve.increases),
    });
    Ok(finish(manifest, &header, rows, chart, exit_code(&sweep.curve, false)))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: &RunOutput, common: &CommonArgs, started: Instant) -> Result<u8> {
    if let (Some(path), Some(svg)) = (&common.svg, &out.svg) {
        write_file(path, svg)?;
    }
    match &common.out {
        Some(path) => write_file(path, &out.csv)?,
        None => std::io::stdout().lock().write_all(out.csv.as_bytes()).context("writing CSV")?,
    }
    eprintln!("wall time: {:.3} s", started.elapsed().as_secs_f64());
    eprintln!("csv sha256: {}", output::sha256_hex(out.csv.as_bytes()));
    Ok(out.code)
}

/// Runs a parsed command line. `command` is the rendered invocation for the manifest.
pub fn run(cli: &Cli, command: &str) -> Result<u8> {
    let started = Instant::now();
    match &cli.command {
        Command::GCurve(a) => emit(&g_curve_run(a, command)?, &a.common, started),
        Command::DartboardSweep(a) => emit(&sweep_run(a, command)?, &a.common, started),
        Command::Reproduce { case } => {
            let report = reproduce::run(*case)?;
            print!("{}", report.render(*case));
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
        }
    }
}

/// Exit code for an error that escaped [`run`].
pub fn error_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        EXIT_USAGE
    } else {
        EXIT_FAIL
    }
}
