use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;

use qspf::{hamsim_target, random_target, targets::read_target, ChebTarget, HamSimSpec};

use crate::usage;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetKind {
    /// Gaussian Chebyshev coefficients rescaled to `--inf-norm`.
    Random,
    /// Jacobi–Anger truncation of `scale·cos(τx)`.
    Hamsim,
    /// JSON file given by `--input`.
    File,
}

#[derive(clap::Args, Clone, Debug)]
pub struct TargetArgs {
    #[arg(long, value_enum, default_value = "random")]
    pub target: TargetKind,
    /// Half degree d of a random target.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub inf_norm: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Simulation time of a hamsim target.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = 0.999)]
    pub scale: f64,
    /// Truncation accuracy of a hamsim target.
    #[arg(long, default_value_t = 1e-15)]
    pub eps0: f64,
    /// Target JSON `{"degree_half": d, "coeffs": [...]}`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

pub struct BuiltTarget {
    pub target: ChebTarget,
    /// How the target was made, echoed into outputs.
    pub meta: serde_json::Value,
}

pub fn random(d: usize, inf_norm: f64, seed: u64) -> Result<BuiltTarget> {
    let target = random_target(d, inf_norm, seed).map_err(|e| usage(e.to_string()))?;
    Ok(BuiltTarget {
        target,
        meta: serde_json::json!({"kind": "random", "inf_norm": inf_norm, "seed": seed}),
    })
}

pub fn hamsim(tau: f64, scale: f64, eps0: f64) -> Result<BuiltTarget> {
    let spec = HamSimSpec { tau, scale, eps0 };
    let target = hamsim_target(&spec).map_err(|e| usage(e.to_string()))?;
    Ok(BuiltTarget {
        target,
        meta: serde_json::json!({"kind": "hamsim", "tau": tau, "scale": scale, "eps0": eps0}),
    })
}

impl TargetArgs {
    pub fn build(&self) -> Result<BuiltTarget> {
        match self.target {
            TargetKind::Random => {
                let d = self
                    .degree
                    .ok_or_else(|| usage("--target random needs --degree"))?;
                random(d, self.inf_norm, self.seed)
            }
            TargetKind::Hamsim => {
                let tau = self
                    .tau
                    .ok_or_else(|| usage("--target hamsim needs --tau"))?;
                hamsim(tau, self.scale, self.eps0)
            }
            TargetKind::File => {
                let path = self
                    .input
                    .as_ref()
                    .ok_or_else(|| usage("--target file needs --input"))?;
                let target = read_target(path)
                    .with_context(|| format!("loading target {}", path.display()))?;
                Ok(BuiltTarget {
                    target,
                    meta: serde_json::json!({"kind": "file", "path": path}),
                })
            }
        }
    }
}
