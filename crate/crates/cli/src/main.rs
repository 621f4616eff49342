//! `qspf`: solve, verify and benchmark QSP phase factors.

mod bench;
mod target;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qspf::{
    direct_residual, fpi_solve, hc_phase_factors, rhw_phase_factors, weiss, Evaluator, FpiConfig,
    PhaseFactors, WeissConfig,
};
use target::{BuiltTarget, TargetArgs};

/// Largest degree accepted for the dense RHW reference solver.
const RHW_MAX_DEGREE: usize = 512;

#[derive(Parser)]
#[command(
    name = "qspf",
    version,
    about = "Phase factors for quantum signal processing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute phase factors for one target.
    Solve(SolveArgs),
    /// Time methods over a grid of degrees and write CSV rows.
    Bench(bench::BenchArgs),
    /// Recompute the residual of stored phases with the direct evaluator.
    Verify(VerifyArgs),
    /// Write a target as JSON.
    Target(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Method {
    /// Half Cholesky (Weiss step + Schur LDL).
    Hc,
    /// Fixed point iteration with the product-tree evaluator.
    Ffpi,
    /// Fixed point iteration with the direct evaluator.
    FpiDirect,
    /// Weiss step + dense Riemann–Hilbert solves; small degrees only.
    RhwOracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Hc => "hc",
            Method::Ffpi => "ffpi",
            Method::FpiDirect => "fpi_direct",
            Method::RhwOracle => "rhw_oracle",
        }
    }
}

/// Numerical settings shared by `solve` and `bench`.
#[derive(clap::Args, Clone, Debug)]
pub struct SolverArgs {
    /// Residual threshold for the fixed point methods.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
    /// Lower bound on 1 - ‖f‖_∞; measured from the target when omitted.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Accuracy of the Weiss step.
    #[arg(long, default_value_t = 1e-14)]
    pub weiss_eps: f64,
    /// Cap on the Weiss grid size.
    #[arg(long, default_value_t = qspf::weiss::DEFAULT_MAX_GRID)]
    pub max_grid: usize,
}

/// One finished solve.
pub struct Solution {
    pub psi: PhaseFactors,
    pub iterations: usize,
    pub wall_ms: f64,
    pub eta: f64,
    pub grid_size: usize,
    pub warnings: Vec<String>,
}

/// Usage errors exit with 2, everything else with 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run_method(method: Method, built: &BuiltTarget, s: &SolverArgs) -> Result<Solution> {
    let t = &built.target;
    let eta = match s.eta {
        Some(eta) => eta,
        None => 1.0 - t.sup_norm(),
    };
    let weiss_cfg = || -> Result<WeissConfig> {
        Ok(WeissConfig::new(eta, s.weiss_eps)
            .map_err(|e| usage(e.to_string()))?
            .with_max_grid(s.max_grid))
    };
    let fpi_cfg = |evaluator| -> Result<FpiConfig> {
        FpiConfig::new(s.tol, s.max_iter, evaluator).map_err(|e| usage(e.to_string()))
    };

    let start = Instant::now();
    let (psi, iterations, grid_size, warnings) = match method {
        Method::Hc => {
            let r = hc_phase_factors(t, &weiss_cfg()?)?;
            (r.phases, 0, r.grid_size.unwrap_or(0), Vec::new())
        }
        Method::Ffpi | Method::FpiDirect => {
            let evaluator = if method == Method::Ffpi {
                Evaluator::Fast
            } else {
                Evaluator::Direct
            };
            let r = fpi_solve(t, &fpi_cfg(evaluator)?)?;
            (r.psi, r.iterations, 0, r.warnings)
        }
        Method::RhwOracle => {
            if t.degree_half() > RHW_MAX_DEGREE {
                anyhow::bail!("rhw_oracle is a dense reference limited to d <= {RHW_MAX_DEGREE}");
            }
            let w = weiss(t, &weiss_cfg()?)?;
            (rhw_phase_factors(&w.c)?, 0, w.grid_size, Vec::new())
        }
    };
    Ok(Solution {
        psi,
        iterations,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        eta,
        grid_size,
        warnings,
    })
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[command(flatten)]
    target: TargetArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct PhasesFile {
    psi: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wall_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    method: Option<String>,
    #[serde(default)]
    warnings: Vec<String>,
    #[serde(default)]
    meta: serde_json::Value,
}

fn write_output(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let built = args.target.build()?;
    let sol = run_method(args.method, &built, &args.solver)?;
    for w in &sol.warnings {
        eprintln!("warning: {w}");
    }
    // The certificate always comes from the direct evaluator.
    let residual = direct_residual(&sol.psi, &built.target);
    let out = PhasesFile {
        psi: sol.psi.reduced().to_vec(),
        residual: Some(residual),
        iterations: Some(sol.iterations),
        wall_ms: Some(sol.wall_ms),
        method: Some(args.method.name().to_string()),
        warnings: sol.warnings,
        meta: serde_json::json!({
            "target": built.meta,
            "degree_half": built.target.degree_half(),
            "eta": sol.eta,
            "grid_size": sol.grid_size,
            "tol": args.solver.tol,
            "version": env!("CARGO_PKG_VERSION"),
        }),
    };
    write_output(&serde_json::to_string_pretty(&out)?, args.output.as_ref())
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Phases JSON with a `psi` array, as written by `solve`.
    #[arg(long)]
    phases: PathBuf,
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

/// Returns whether the residual is within tolerance.
fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    let text = std::fs::read_to_string(&args.phases)
        .with_context(|| format!("reading {}", args.phases.display()))?;
    let file: PhasesFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", args.phases.display()))?;
    let built = args.target.build()?;
    if file.psi.len() != built.target.coeffs().len() {
        anyhow::bail!(
            "{} phases do not match a target of half degree {}",
            file.psi.len(),
            built.target.degree_half()
        );
    }
    let residual = direct_residual(&PhaseFactors::new(file.psi), &built.target);
    let ok = residual <= args.tol;
    println!(
        "residual {residual:e} {}",
        if ok { "ok" } else { "exceeds tolerance" }
    );
    Ok(ok)
}

#[derive(clap::Args)]
struct ExportArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn cmd_target(args: ExportArgs) -> Result<()> {
    let built = args.target.build()?;
    write_output(
        &qspf::targets::target_to_json(&built.target),
        args.output.as_ref(),
    )
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("QSPF_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        usage(format!(
            "QSPF_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the thread pool")
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Solve(a) => cmd_solve(a).map(|_| true),
        Command::Bench(a) => bench::cmd_bench(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Target(a) => cmd_target(a).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
