//! Experiment targets: seeded random even polynomials with a prescribed sup
//! norm, and the Jacobi–Anger truncation of `scale·cos(τx)`.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{QspError, Result};
use crate::poly::ChebTarget;

/// Parameters of the Hamiltonian-simulation target `scale·cos(τx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamSimSpec {
    pub tau: f64,
    pub scale: f64,
    /// Truncation accuracy of the Jacobi–Anger series.
    pub eps0: f64,
}

impl HamSimSpec {
    pub fn new(tau: f64) -> Self {
        Self {
            tau,
            scale: 0.999,
            eps0: 1e-15,
        }
    }

    /// Even truncation degree `n = 2d`: `⌈1.4τ + ln(1/ε₀)⌉` rounded up to even.
    pub fn truncation_degree(&self) -> usize {
        let n = (1.4 * self.tau + (1.0 / self.eps0).ln()).ceil().max(0.0) as usize;
        n + n % 2
    }
}

/// Random target of half degree `d` with `‖f‖_∞ = inf_norm`.
///
/// Coefficients are i.i.d. standard normal from ChaCha20 seeded with `seed`,
/// then rescaled using [`ChebTarget::sup_norm`].
pub fn random_target(d: usize, inf_norm: f64, seed: u64) -> Result<ChebTarget> {
    if !(inf_norm > 0.0 && inf_norm < 1.0) {
        return Err(QspError::InvalidArgument(format!(
            "inf_norm must lie in (0, 1), got {inf_norm}"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..=d).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut target = ChebTarget::new(raw)?;
    // A second pass corrects the last bits of the rescaling.
    for _ in 0..2 {
        let norm = target.sup_norm();
        if !(norm > 0.0) {
            return Err(QspError::InvalidArgument("random draw vanished".into()));
        }
        let s = inf_norm / norm;
        target = ChebTarget::new(target.coeffs().iter().map(|c| c * s).collect())?;
    }
    Ok(target)
}

/// Truncated Jacobi–Anger expansion of `scale·cos(τx)`:
/// `f̂_0 = scale·J_0(τ)`, `f̂_j = 2·scale·(-1)^j·J_{2j}(τ)`.
pub fn hamsim_target(spec: &HamSimSpec) -> Result<ChebTarget> {
    if !(spec.tau >= 0.0) || !spec.tau.is_finite() {
        return Err(QspError::InvalidArgument(format!(
            "tau must be finite and non-negative, got {}",
            spec.tau
        )));
    }
    if !(spec.scale > 0.0 && spec.scale < 1.0) || !(spec.eps0 > 0.0) {
        return Err(QspError::InvalidArgument(format!(
            "need 0 < scale < 1 and eps0 > 0, got scale = {}, eps0 = {}",
            spec.scale, spec.eps0
        )));
    }
    let d = spec.truncation_degree() / 2;
    let j = bessel_j_sequence(2 * d, spec.tau);
    let coeffs = (0..=d)
        .map(|k| {
            if k == 0 {
                spec.scale * j[0]
            } else {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                2.0 * spec.scale * sign * j[2 * k]
            }
        })
        .collect();
    ChebTarget::new(coeffs)
}

/// `J_0(x), …, J_{kmax}(x)` for `x ≥ 0`.
///
/// Miller's backward recurrence normalized by `J_0 + 2Σ_k J_{2k} = 1`; power
/// series below `x = 2`.
pub fn bessel_j_sequence(kmax: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; kmax + 1];
        out[0] = 1.0;
        return out;
    }
    if x < 2.0 {
        return (0..=kmax).map(|k| bessel_j_series(k, x)).collect();
    }
    let top = kmax.max(x.ceil() as usize);
    let mut start = top + 40 + (40.0 * top as f64).sqrt().ceil() as usize;
    start += start % 2;

    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-300;
    for k in (1..=start).rev() {
        vals[k - 1] = 2.0 * k as f64 / x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e250 {
            for v in &mut vals[k - 1..] {
                *v *= 1e-250;
            }
        }
    }
    let norm: f64 = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    vals.truncate(kmax + 1);
    vals.iter_mut().for_each(|v| *v /= norm);
    vals
}

fn bessel_j_series(k: usize, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=k {
        term *= h / i as f64;
    }
    let mut sum = term;
    let mut m = 0usize;
    while term.abs() > 1e-18 * sum.abs() && term != 0.0 {
        m += 1;
        term *= -h * h / (m as f64 * (m + k) as f64);
        sum += term;
    }
    sum
}

/// On-disk target format: `{"degree_half": d, "coeffs": [f̂_0, …, f̂_d]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetFile {
    pub degree_half: usize,
    pub coeffs: Vec<f64>,
}

impl From<&ChebTarget> for TargetFile {
    fn from(t: &ChebTarget) -> Self {
        Self {
            degree_half: t.degree_half(),
            coeffs: t.coeffs().to_vec(),
        }
    }
}

impl TryFrom<TargetFile> for ChebTarget {
    type Error = QspError;

    fn try_from(f: TargetFile) -> Result<Self> {
        if f.coeffs.len() != f.degree_half + 1 {
            return Err(QspError::InvalidArgument(format!(
                "degree_half = {} needs {} coefficients, found {}",
                f.degree_half,
                f.degree_half + 1,
                f.coeffs.len()
            )));
        }
        ChebTarget::new(f.coeffs)
    }
}

pub fn target_from_json(text: &str) -> Result<ChebTarget> {
    let file: TargetFile = serde_json::from_str(text)
        .map_err(|e| QspError::InvalidArgument(format!("target JSON: {e}")))?;
    file.try_into()
}

pub fn target_to_json(target: &ChebTarget) -> String {
    serde_json::to_string_pretty(&TargetFile::from(target)).expect("plain numbers serialize")
}

pub fn read_target(path: &Path) -> Result<ChebTarget> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| QspError::InvalidArgument(format!("{}: {e}", path.display())))?;
    target_from_json(&text)
}
