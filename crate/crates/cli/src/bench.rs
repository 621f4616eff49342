use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

use qspf::{direct_residual, qsp_map, Evaluator};

use crate::target::{self, BuiltTarget};
use crate::{run_method, usage, Method, Solution, SolverArgs};

pub const SCHEMA_LINE: &str = "# schema=1";
pub const HEADER: &str = "method,d,eta,wall_ms,residual,iterations,seed,grid_size";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchTarget {
    Random,
    Hamsim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ResidualMode {
    /// Direct `O(d²)` evaluator, independent of every solver.
    Direct,
    /// Product-tree evaluator; for sweeps where the direct check dominates.
    Fast,
}

#[derive(clap::Args)]
pub struct BenchArgs {
    /// Comma-separated methods, e.g. `hc,ffpi`.
    #[arg(long, value_enum, value_delimiter = ',', required = true, num_args = 1..)]
    methods: Vec<Method>,
    #[arg(long, value_enum, default_value = "random")]
    target: BenchTarget,
    /// Half degrees for random targets.
    #[arg(long, value_delimiter = ',')]
    degrees: Vec<usize>,
    /// Simulation times for hamsim targets.
    #[arg(long, value_delimiter = ',')]
    taus: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    inf_norm: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.999)]
    scale: f64,
    #[arg(long, default_value_t = 1e-15)]
    eps0: f64,
    #[command(flatten)]
    solver: SolverArgs,
    /// Timed runs per cell after one warmup run; the median is recorded.
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, value_enum, default_value = "direct")]
    residual: ResidualMode,
    #[arg(long, default_value = "bench.csv")]
    output: PathBuf,
    /// Overwrite an existing output file.
    #[arg(long, conflicts_with = "append")]
    force: bool,
    /// Add rows to an existing output file.
    #[arg(long)]
    append: bool,
    /// Record failures on stderr and continue with the next cell.
    #[arg(long)]
    keep_going: bool,
}

#[derive(Debug, Serialize)]
struct BenchRecord {
    method: &'static str,
    d: usize,
    eta: f64,
    wall_ms: f64,
    residual: f64,
    iterations: usize,
    seed: u64,
    grid_size: usize,
}

fn open_output(args: &BenchArgs) -> Result<File> {
    let path = &args.output;
    if path.exists() && !args.force && !args.append {
        return Err(usage(format!(
            "{} exists; pass --force to overwrite or --append to add rows",
            path.display()
        )));
    }
    if args.append && path.exists() {
        let f = File::open(path).with_context(|| format!("reading {}", path.display()))?;
        let mut lines = BufReader::new(f).lines();
        let schema = lines.next().transpose()?.unwrap_or_default();
        let header = lines.next().transpose()?.unwrap_or_default();
        if schema.trim() != SCHEMA_LINE || header.trim() != HEADER {
            anyhow::bail!("{} is not a schema=1 benchmark file", path.display());
        }
        return OpenOptions::new()
            .append(true)
            .open(path)
            .with_context(|| format!("opening {}", path.display()));
    }
    let mut f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    writeln!(f, "{SCHEMA_LINE}\n{HEADER}")?;
    Ok(f)
}

fn targets(args: &BenchArgs) -> Result<Vec<BuiltTarget>> {
    match args.target {
        BenchTarget::Random => {
            if args.degrees.is_empty() {
                return Err(usage("--target random needs --degrees"));
            }
            args.degrees
                .iter()
                .map(|&d| target::random(d, args.inf_norm, args.seed))
                .collect()
        }
        BenchTarget::Hamsim => {
            if args.taus.is_empty() {
                return Err(usage("--target hamsim needs --taus"));
            }
            args.taus
                .iter()
                .map(|&tau| target::hamsim(tau, args.scale, args.eps0))
                .collect()
        }
    }
}

/// Warmup, then the median of `repeats` timed solves.
fn timed(method: Method, built: &BuiltTarget, args: &BenchArgs) -> Result<(Solution, f64)> {
    run_method(method, built, &args.solver)?;
    let mut runs = Vec::with_capacity(args.repeats);
    for _ in 0..args.repeats {
        runs.push(run_method(method, built, &args.solver)?);
    }
    runs.sort_by(|a, b| a.wall_ms.total_cmp(&b.wall_ms));
    let sol = runs.swap_remove(runs.len() / 2);
    let wall = sol.wall_ms;
    Ok((sol, wall))
}

/// Cell failures are fatal unless `--keep-going` is set.
pub fn cmd_bench(args: BenchArgs) -> Result<bool> {
    if args.methods.is_empty() {
        return Err(usage("--methods must list at least one method"));
    }
    if args.repeats == 0 {
        return Err(usage("--repeats must be at least 1"));
    }
    let targets = targets(&args)?;
    let mut out = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(open_output(&args)?);

    let mut failures = 0usize;
    for built in &targets {
        let d = built.target.degree_half();
        for &method in &args.methods {
            match timed(method, built, &args) {
                Ok((sol, wall_ms)) => {
                    let residual = match args.residual {
                        ResidualMode::Direct => direct_residual(&sol.psi, &built.target),
                        ResidualMode::Fast => qsp_map(&sol.psi, Evaluator::Fast)
                            .iter()
                            .zip(built.target.coeffs())
                            .map(|(q, f)| (q - f).abs())
                            .fold(0.0, f64::max),
                    };
                    out.serialize(BenchRecord {
                        method: method.name(),
                        d,
                        eta: sol.eta,
                        wall_ms,
                        residual,
                        iterations: sol.iterations,
                        seed: args.seed,
                        grid_size: sol.grid_size,
                    })?;
                    out.flush()?;
                    eprintln!(
                        "{} d={d}: {wall_ms:.3} ms, residual {residual:.2e}",
                        method.name()
                    );
                }
                Err(e) if args.keep_going && e.downcast_ref::<crate::UsageError>().is_none() => {
                    failures += 1;
                    eprintln!("{} d={d} failed: {e:#}", method.name());
                }
                Err(e) => return Err(e.context(format!("{} at d = {d}", method.name()))),
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} cell(s) failed");
    }
    Ok(true)
}
