//! Fixed point iteration `Ψ ← Ψ - ½(F(Ψ) - f̂)`.
//!
//! With the product-tree evaluator behind `F` this is FFPI; with the direct
//! evaluator it is the plain `O(d²)`-per-step FPI baseline.

use std::time::{Duration, Instant};

use crate::error::{QspError, Result};
use crate::poly::ChebTarget;
use crate::qsp::{qsp_map, Evaluator, PhaseFactors};

/// Contraction is guaranteed when `‖f̂‖₁` stays below this value.
pub const CONVERGENCE_BOUND: f64 = 0.861;

/// Consecutive iterations above `10×` the initial residual before giving up.
const DIVERGENCE_PATIENCE: usize = 5;

/// Flags a run whose residual stays above ten times its first value.
#[derive(Debug, Default)]
struct DivergenceGuard {
    initial: Option<f64>,
    streak: usize,
}

impl DivergenceGuard {
    /// Returns true once the run should be abandoned.
    fn observe(&mut self, residual: f64) -> bool {
        if residual.is_nan() {
            return true;
        }
        let base = *self.initial.get_or_insert(residual);
        if residual > 10.0 * base {
            self.streak += 1;
        } else {
            self.streak = 0;
        }
        self.streak >= DIVERGENCE_PATIENCE
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FpiConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub evaluator: Evaluator,
}

impl FpiConfig {
    pub fn new(tol: f64, max_iter: usize, evaluator: Evaluator) -> Result<Self> {
        if !(tol > 0.0) || max_iter == 0 {
            return Err(QspError::InvalidArgument(format!(
                "need tol > 0 and max_iter >= 1, got tol = {tol}, max_iter = {max_iter}"
            )));
        }
        Ok(Self {
            tol,
            max_iter,
            evaluator,
        })
    }
}

impl Default for FpiConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 1000,
            evaluator: Evaluator::Fast,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub psi: PhaseFactors,
    /// Number of evaluations of `F`.
    pub iterations: usize,
    /// `‖F(Ψ) - f̂‖_∞` after each evaluation.
    pub residual_history: Vec<f64>,
    pub wall_time: Duration,
    pub warnings: Vec<String>,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(f64::NAN)
    }
}

/// `‖f̂‖₁`; compare against [`CONVERGENCE_BOUND`].
pub fn check_convergence_domain(target: &ChebTarget) -> f64 {
    target.one_norm()
}

pub fn fpi_solve(target: &ChebTarget, cfg: &FpiConfig) -> Result<SolveReport> {
    let start = Instant::now();
    let f_hat = target.coeffs();
    let mut warnings = Vec::new();
    let l1 = check_convergence_domain(target);
    if l1 >= CONVERGENCE_BOUND {
        warnings.push(format!(
            "‖f̂‖₁ = {l1:.6} is not below {CONVERGENCE_BOUND}; convergence is not guaranteed"
        ));
    }

    let mut psi = PhaseFactors::zeros(target.degree_half());
    let mut history = Vec::new();
    let mut guard = DivergenceGuard::default();
    for iteration in 1..=cfg.max_iter {
        let q = qsp_map(&psi, cfg.evaluator);
        let residual =
            q.iter()
                .zip(f_hat)
                .map(|(qj, fj)| (qj - fj).abs())
                .fold(0.0, |m: f64, r| {
                    if r.is_nan() || m.is_nan() {
                        f64::NAN
                    } else {
                        m.max(r)
                    }
                });
        history.push(residual);
        if residual <= cfg.tol {
            return Ok(SolveReport {
                psi,
                iterations: iteration,
                residual_history: history,
                wall_time: start.elapsed(),
                warnings,
            });
        }
        if guard.observe(residual) {
            return Err(QspError::Divergence {
                iteration,
                residual,
            });
        }
        for ((s, qj), fj) in psi.reduced_mut().iter_mut().zip(&q).zip(f_hat) {
            *s -= 0.5 * (qj - fj);
        }
    }
    Err(QspError::MaxIterReached {
        iterations: cfg.max_iter,
        residual: history.last().copied().unwrap_or(f64::NAN),
    })
}
