//! Dense reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use qspf::{hc_phase_factors, ChebTarget, HalfCholResult, WeissConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Lower-triangular Toeplitz `B` with first column `p`.
pub fn toeplitz_b(p: &[f64]) -> DMatrix<f64> {
    let n = p.len();
    DMatrix::from_fn(n, n, |i, j| if i >= j { p[i - j] } else { 0.0 })
}

/// `K = I + BBᵀ`, formed explicitly.
pub fn dense_k(p: &[f64]) -> DMatrix<f64> {
    let b = toeplitz_b(p);
    DMatrix::identity(p.len(), p.len()) + &b * b.transpose()
}

/// Unit lower `L` and diagonal `D` with `K = LDLᵀ`, via nalgebra's Cholesky.
pub fn dense_ldl(k: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let l = k.clone().cholesky().expect("K is SPD").unpack();
    let diag: Vec<f64> = (0..l.nrows()).map(|i| l[(i, i)]).collect();
    let mut unit = l.clone();
    for (j, dj) in diag.iter().enumerate() {
        for i in 0..l.nrows() {
            unit[(i, j)] /= dj;
        }
    }
    (unit, diag.iter().map(|v| v * v).collect())
}

/// Solves `Lx = rhs` for unit lower-triangular `L`.
pub fn unit_lower_solve(l: &DMatrix<f64>, rhs: &[f64]) -> Vec<f64> {
    let x = l
        .solve_lower_triangular(&DVector::from_column_slice(rhs))
        .expect("unit diagonal");
    x.iter().copied().collect()
}

/// `‖G_0‖_F²` for `G_0 = [e_0, p]`.
pub fn generator_norm_sq(p: &[f64]) -> f64 {
    1.0 + p.iter().map(|v| v * v).sum::<f64>()
}

/// Dense `L` from the columns retained by the streaming solver.
pub fn l_from_columns(res: &HalfCholResult) -> DMatrix<f64> {
    let cols = res.l_columns.as_ref().expect("dense mode");
    let n = cols.len();
    DMatrix::from_fn(n, n, |i, j| cols[j][i])
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn random_phases(seed: u64, len: usize, amp: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(-amp..amp)).collect()
}

/// Half Cholesky with `η = 1 - ‖f‖_∞` and Weiss accuracy `1e-14`.
pub fn hc(target: &ChebTarget) -> HalfCholResult {
    let eta = 1.0 - target.sup_norm();
    hc_phase_factors(target, &WeissConfig::new(eta, 1e-14).unwrap()).unwrap()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
