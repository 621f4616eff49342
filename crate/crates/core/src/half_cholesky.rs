//! Half Cholesky: LDL of `K = I + BBᵀ` by the generalized Schur algorithm.
//!
//! `B` is the real lower-triangular Toeplitz matrix with first column `p`.
//! `K` satisfies `K - ZKZᵀ = GGᵀ` with `G = [e_0, p]` and `Z` the down shift,
//! so each column of `L` comes from one 2×2 rotation of the rank-two
//! generator. `K` itself is never formed. The solver only needs
//! `y = L⁻¹p`, and the reduced phases are `Ψ = rev(arctan(y))`.

use crate::error::{QspError, Result};
use crate::poly::{ChebTarget, C64};
use crate::qsp::PhaseFactors;
use crate::weiss::{weiss, WeissConfig};

/// Largest tolerated `|Re c_k|` in [`build_p`].
pub const IMAGINARY_TOL: f64 = 1e-8;

/// Rank-two generator `[u_k, v_k]` after the rotation at step `k`.
///
/// The first `k` entries of `u` and the first `k + 1` entries of `v` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorPair {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub step: usize,
}

#[derive(Debug, Clone)]
pub struct HalfCholResult {
    /// `y = L⁻¹p`.
    pub y: Vec<f64>,
    /// Diagonal of `D` in `K = LDLᵀ`; equals `u_{k,k}²`.
    pub diag_d: Vec<f64>,
    pub phases: PhaseFactors,
    /// Dense unit lower factor, column-major (`l[k][i] = L_{ik}`); only kept
    /// by [`schur_ldl_halfsolve_dense`].
    pub l_columns: Option<Vec<Vec<f64>>>,
    /// Weiss grid size when produced by [`hc_phase_factors`].
    pub grid_size: Option<usize>,
}

/// `p = -i·rev(c)` as a real vector.
pub fn build_p(c: &[C64]) -> Result<Vec<f64>> {
    if let Some((index, v)) = c
        .iter()
        .enumerate()
        .find(|(_, v)| v.re.abs() > IMAGINARY_TOL)
    {
        return Err(QspError::NotImaginary { index, re: v.re });
    }
    Ok(c.iter().rev().map(|v| v.im).collect())
}

/// Runs the Schur recursion on `G_0 = [e_0, p]`, calling `visit(k, u_kk, u,
/// v)` with the rotated generator columns restricted to rows `k..`.
fn run_schur<F>(p: &[f64], mut visit: F) -> Result<()>
where
    F: FnMut(usize, f64, &[f64], &[f64]),
{
    let n = p.len();
    let mut gu = vec![0.0f64; n];
    let mut gv = p.to_vec();
    if n > 0 {
        gu[0] = 1.0;
    }
    for k in 0..n {
        let (g1, g2) = (gu[k], gv[k]);
        let r = g1.hypot(g2);
        if !(r >= 1e-300) {
            return Err(QspError::Breakdown { k, pivot: r });
        }
        let (c, s) = (g1 / r, g2 / r);
        for (a, b) in gu[k..].iter_mut().zip(gv[k..].iter_mut()) {
            let (x, y) = (*a, *b);
            *a = c * x + s * y;
            *b = c * y - s * x;
        }
        gu[k] = r;
        gv[k] = 0.0;
        visit(k, r, &gu[k..], &gv[k..]);
        // G_{k+1} = [Z u_k, v_k].
        if k + 1 < n {
            gu.copy_within(k..n - 1, k + 1);
        }
        gu[k] = 0.0;
    }
    Ok(())
}

fn halfsolve(p: &[f64], retain: bool) -> Result<HalfCholResult> {
    let n = p.len();
    let mut y = p.to_vec();
    let mut diag_d = Vec::with_capacity(n);
    let mut l_columns = retain.then(|| Vec::with_capacity(n));
    run_schur(p, |k, r, u, _v| {
        diag_d.push(r * r);
        let inv = 1.0 / r;
        // Column k of L is u / u_kk; consume it right away.
        let yk = y[k];
        for (yi, ui) in y[k + 1..].iter_mut().zip(&u[1..]) {
            *yi -= ui * inv * yk;
        }
        if let Some(cols) = l_columns.as_mut() {
            let mut col = vec![0.0; n];
            for (dst, ui) in col[k..].iter_mut().zip(u) {
                *dst = ui * inv;
            }
            col[k] = 1.0;
            cols.push(col);
        }
    })?;
    let phases = PhaseFactors::new(y.iter().rev().map(|v| v.atan()).collect());
    Ok(HalfCholResult {
        y,
        diag_d,
        phases,
        l_columns,
        grid_size: None,
    })
}

/// Streaming half Cholesky solve, `O(d²)` time and `O(d)` extra memory.
pub fn schur_ldl_halfsolve(p: &[f64]) -> Result<HalfCholResult> {
    halfsolve(p, false)
}

/// As [`schur_ldl_halfsolve`] but also returns the dense factor `L`.
pub fn schur_ldl_halfsolve_dense(p: &[f64]) -> Result<HalfCholResult> {
    halfsolve(p, true)
}

/// Every rotated generator `[u_k, v_k]`, padded to full length. `O(d²)` memory.
pub fn schur_generators(p: &[f64]) -> Result<Vec<GeneratorPair>> {
    let n = p.len();
    let mut out = Vec::with_capacity(n);
    run_schur(p, |k, _r, u, v| {
        let mut uu = vec![0.0; n];
        let mut vv = vec![0.0; n];
        uu[k..].copy_from_slice(u);
        vv[k..].copy_from_slice(v);
        out.push(GeneratorPair {
            u: uu,
            v: vv,
            step: k,
        });
    })?;
    Ok(out)
}

/// Phase factors of `target` by the Half Cholesky pipeline:
/// `b = i·f` → Weiss `c` → `p = -i·rev(c)` → Schur `y = L⁻¹p` →
/// `Ψ = rev(arctan(y))`.
pub fn hc_phase_factors(target: &ChebTarget, cfg: &WeissConfig) -> Result<HalfCholResult> {
    let w = weiss(target, cfg)?;
    let p = build_p(&w.c)?;
    let mut res = schur_ldl_halfsolve(&p)?;
    res.grid_size = Some(w.grid_size);
    Ok(res)
}
