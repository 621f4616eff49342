//! Evaluation of the QSP unitary and of the map from reduced phase factors to
//! Chebyshev coefficients.
//!
//! With `t = e^{iθ}` and `x = cos θ`, every factor `e^{iφσ_z} W(x)` becomes a
//! 2×2 matrix of degree-one Laurent polynomials in `t`. Partial products keep
//! the shape `[[P, Q], [Q̄, P̄]]`, so only the pair `(P, Q)` is carried through
//! a balanced product tree. The same tree, with a different merge rule, runs
//! the forward nonlinear Fourier transform in the `z` variable.

use rayon::join;

use crate::error::{QspError, Result};
use crate::poly::{
    convolve_direct, fft_forward, fft_inverse, laurent_mul, zero_padded, LaurentPoly, C64,
};

/// Below this many output coefficients products are formed by schoolbook
/// convolution.
const DIRECT_CONV_LIMIT: usize = 64;

/// Subtrees with at least this many leaves are merged on separate rayon tasks.
const PARALLEL_LEAVES: usize = 256;

/// Reduced phase factors `Ψ = (ψ_0, …, ψ_d)` for an even-degree QSP sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFactors {
    reduced: Vec<f64>,
}

impl PhaseFactors {
    pub fn new(reduced: Vec<f64>) -> Self {
        assert!(!reduced.is_empty(), "phase factors need at least ψ_0");
        Self { reduced }
    }

    pub fn zeros(degree_half: usize) -> Self {
        Self::new(vec![0.0; degree_half + 1])
    }

    pub fn reduced(&self) -> &[f64] {
        &self.reduced
    }

    pub fn reduced_mut(&mut self) -> &mut [f64] {
        &mut self.reduced
    }

    pub fn into_reduced(self) -> Vec<f64> {
        self.reduced
    }

    pub fn degree_half(&self) -> usize {
        self.reduced.len() - 1
    }

    /// The symmetric full sequence `Φ`, see [`expand_reduced`].
    pub fn full(&self) -> Vec<f64> {
        expand_reduced(self)
    }
}

/// `Φ = (ψ_d, …, ψ_1, ψ_0, ψ_1, …, ψ_d)`.
pub fn expand_reduced(psi: &PhaseFactors) -> Vec<f64> {
    let r = &psi.reduced;
    r.iter().skip(1).rev().chain(r.iter()).copied().collect()
}

/// Entries `(P, Q)` of a partial product `[[P, Q], [Q̄, P̄]]` in `t`.
#[derive(Debug, Clone)]
pub struct Su2LaurentPair {
    pub p: LaurentPoly,
    pub q: LaurentPoly,
}

impl Su2LaurentPair {
    pub fn identity() -> Self {
        Self {
            p: LaurentPoly::constant(C64::new(1.0, 0.0)),
            q: LaurentPoly::zero(),
        }
    }

    /// `V_j(t) = e^{iφσ_z} W(x)` with `x = (t + 1/t)/2`.
    fn factor(phi: f64) -> Self {
        let e = C64::from_polar(0.5, phi);
        let zero = C64::new(0.0, 0.0);
        Self {
            p: LaurentPoly::new(-1, vec![e, zero, e]),
            q: LaurentPoly::new(-1, vec![-e, zero, e]),
        }
    }

    /// `self · rhs` for matrices of the form `[[P, Q], [Q̄, P̄]]`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let (p, q) = merge_qsp(&self.p, &self.q, &rhs.p, &rhs.q);
        Self { p, q }
    }
}

/// Balanced divide and conquer over leaves `lo..hi` (non-empty).
fn reduce_range<T, L, M>(lo: usize, hi: usize, leaf: &L, merge: &M) -> T
where
    T: Send,
    L: Fn(usize) -> T + Sync,
    M: Fn(&T, &T) -> T + Sync,
{
    debug_assert!(hi > lo);
    if hi - lo == 1 {
        return leaf(lo);
    }
    let mid = lo + (hi - lo) / 2;
    let (left, right) = if hi - lo >= PARALLEL_LEAVES {
        join(
            || reduce_range(lo, mid, leaf, merge),
            || reduce_range(mid, hi, leaf, merge),
        )
    } else {
        (
            reduce_range(lo, mid, leaf, merge),
            reduce_range(mid, hi, leaf, merge),
        )
    };
    merge(&left, &right)
}

/// `P₁₂ = P₁P₂ + Q₁Q̄₂`, `Q₁₂ = P₁Q₂ + Q₁P̄₂`.
///
/// All four inputs of a side share one window, which holds for every node of
/// the product tree.
fn merge_qsp(
    p1: &LaurentPoly,
    q1: &LaurentPoly,
    p2: &LaurentPoly,
    q2: &LaurentPoly,
) -> (LaurentPoly, LaurentPoly) {
    debug_assert_eq!((p1.lo(), p1.width()), (q1.lo(), q1.width()));
    debug_assert_eq!((p2.lo(), p2.width()), (q2.lo(), q2.width()));
    let lo = p1.lo() + p2.lo();
    let out_len = p1.width() + p2.width() - 1;

    if out_len <= DIRECT_CONV_LIMIT {
        let p2_bar: Vec<C64> = p2.coeffs().iter().map(|c| c.conj()).collect();
        let q2_bar: Vec<C64> = q2.coeffs().iter().map(|c| c.conj()).collect();
        let p = add_vec(
            convolve_direct(p1.coeffs(), p2.coeffs()),
            &convolve_direct(q1.coeffs(), &q2_bar),
        );
        let q = add_vec(
            convolve_direct(p1.coeffs(), q2.coeffs()),
            &convolve_direct(q1.coeffs(), &p2_bar),
        );
        return (LaurentPoly::new(lo, p), LaurentPoly::new(lo, q));
    }

    let n = out_len.next_power_of_two();
    let spectrum = |src: &LaurentPoly| {
        let mut v = zero_padded(src.coeffs(), n);
        fft_forward(&mut v);
        v
    };
    let (fp1, fq1, fp2, fq2) = (spectrum(p1), spectrum(q1), spectrum(p2), spectrum(q2));
    // The DFT of conjugated coefficients is the conjugated, index-reversed DFT.
    let scale = 1.0 / n as f64;
    let mut p = vec![C64::new(0.0, 0.0); n];
    let mut q = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let rk = (n - k) % n;
        let fq2_bar = fq2[rk].conj();
        let fp2_bar = fp2[rk].conj();
        p[k] = (fp1[k] * fp2[k] + fq1[k] * fq2_bar) * scale;
        q[k] = (fp1[k] * fq2[k] + fq1[k] * fp2_bar) * scale;
    }
    fft_inverse(&mut p);
    fft_inverse(&mut q);
    p.truncate(out_len);
    q.truncate(out_len);
    (LaurentPoly::new(lo, p), LaurentPoly::new(lo, q))
}

fn add_vec(mut a: Vec<C64>, b: &[C64]) -> Vec<C64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Product `V_0(t)⋯V_{n-1}(t)` of the leading `n = len(Φ) - 1` factors.
pub fn qsp_product(phi: &[f64]) -> Su2LaurentPair {
    let n = phi.len().saturating_sub(1);
    if n == 0 {
        return Su2LaurentPair::identity();
    }
    reduce_range(
        0,
        n,
        &|j| Su2LaurentPair::factor(phi[j]),
        &|a: &Su2LaurentPair, b: &Su2LaurentPair| a.mul(b),
    )
}

fn check_parity(phi: &[f64]) -> Result<usize> {
    if phi.is_empty() || phi.len().is_multiple_of(2) {
        return Err(QspError::UnsupportedParity(phi.len().max(1) - 1));
    }
    Ok((phi.len() - 1) / 2)
}

/// Chebyshev coefficients `(q_0, …, q_d)` of `g(x, Φ)` through the product
/// tree, `O(d log² d)`.
pub fn eval_fast_cheb(phi: &[f64]) -> Result<Vec<f64>> {
    let d = check_parity(phi)?;
    let last = C64::from_polar(1.0, phi[2 * d]);
    let prod = qsp_product(phi);
    // Right multiplication by e^{iφ_n σ_z} scales the upper-left entry.
    let p = prod.p.scale(last);
    let mut q = Vec::with_capacity(d + 1);
    q.push(p.coeff(0).im);
    for j in 1..=d as i64 {
        q.push((p.coeff(2 * j) + p.coeff(-2 * j)).im);
    }
    Ok(q)
}

#[derive(Debug, Clone, Copy)]
struct Mat2([[C64; 2]; 2]);

impl Mat2 {
    fn phase(phi: f64) -> Self {
        let z = C64::new(0.0, 0.0);
        Mat2([
            [C64::from_polar(1.0, phi), z],
            [z, C64::from_polar(1.0, -phi)],
        ])
    }

    fn signal(x: f64) -> Self {
        let s = C64::new(0.0, (1.0 - x * x).sqrt());
        let x = C64::new(x, 0.0);
        Mat2([[x, s], [s, x]])
    }

    fn mul(&self, o: &Self) -> Self {
        let a = &self.0;
        let b = &o.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// Upper-left entry of `U(x, Φ)` by explicit 2×2 products.
pub fn qsp_unitary_entry(phi: &[f64], x: f64) -> Result<C64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(QspError::Domain(x));
    }
    if phi.is_empty() {
        return Err(QspError::UnsupportedParity(0));
    }
    let w = Mat2::signal(x);
    let mut u = Mat2::phase(phi[0]);
    for &p in &phi[1..] {
        u = u.mul(&w).mul(&Mat2::phase(p));
    }
    Ok(u.0[0][0])
}

/// `g(x, Φ) = Im p(x)` at each point, `O(len(Φ))` per point.
pub fn eval_direct(phi: &[f64], xs: &[f64]) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    xs.par_iter()
        .map(|&x| qsp_unitary_entry(phi, x).map(|p| p.im))
        .collect()
}

/// Chebyshev coefficients of `g(x, Φ)` from direct evaluation on the grid
/// `x_j = cos(2πj/(4d+1))` followed by an explicit cosine transform. `O(d²)`.
pub fn eval_direct_cheb(phi: &[f64]) -> Result<Vec<f64>> {
    let d = check_parity(phi)?;
    let m = 4 * d + 1;
    let angle = |j: usize| 2.0 * std::f64::consts::PI * j as f64 / m as f64;
    let xs: Vec<f64> = (0..=2 * d).map(|j| angle(j).cos()).collect();
    let g = eval_direct(phi, &xs)?;
    let cos_table: Vec<f64> = (0..m).map(|r| angle(r).cos()).collect();
    let q = (0..=d)
        .map(|k| {
            let mut acc = g[0];
            for (j, gj) in g.iter().enumerate().skip(1) {
                acc += 2.0 * gj * cos_table[(2 * k * j) % m];
            }
            let w = if k == 0 { 1.0 } else { 2.0 };
            w * acc / m as f64
        })
        .collect();
    Ok(q)
}

/// Which evaluator backs the map `Ψ ↦ q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluator {
    /// Product tree, `O(d log² d)`.
    #[default]
    Fast,
    /// Explicit matrix products on the Chebyshev grid, `O(d²)`.
    Direct,
}

/// The map `F: Ψ ↦ Φ ↦ q` whose root `F(Ψ) = f̂` defines the phase factors.
pub fn qsp_map(psi: &PhaseFactors, evaluator: Evaluator) -> Vec<f64> {
    let phi = psi.full();
    let q = match evaluator {
        Evaluator::Fast => eval_fast_cheb(&phi),
        Evaluator::Direct => eval_direct_cheb(&phi),
    };
    q.expect("expanded reduced phases always have odd length")
}

/// Pair `(a, b)` of the nonlinear Fourier transform as a 2×2 step matrix
/// `[[a, b], [-b*, a*]]`.
#[derive(Debug, Clone)]
struct NlftStep {
    a: LaurentPoly,
    b: LaurentPoly,
}

fn mul_small(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    if p.width() + q.width() <= DIRECT_CONV_LIMIT {
        if p.width() == 0 || q.width() == 0 {
            return LaurentPoly::zero();
        }
        LaurentPoly::new(p.lo() + q.lo(), convolve_direct(p.coeffs(), q.coeffs()))
    } else {
        laurent_mul(p, q)
    }
}

impl NlftStep {
    fn mul(&self, o: &Self) -> Self {
        let a = mul_small(&self.a, &o.a)
            .add(&mul_small(&self.b, &o.b.star()).scale(C64::new(-1.0, 0.0)));
        let b = mul_small(&self.a, &o.b).add(&mul_small(&self.b, &o.a.star()));
        Self { a, b }
    }
}

/// Forward NLFT of a sequence `F` indexed `-d..=d` (slice of length `2d+1`).
///
/// Returns `(a, b)` with `a a* + b b* = 1` on the unit circle.
pub fn nlft_forward(f: &[C64]) -> Result<(LaurentPoly, LaurentPoly)> {
    if f.len().is_multiple_of(2) {
        return Err(QspError::InvalidArgument(format!(
            "NLFT input must be indexed -d..=d, got length {}",
            f.len()
        )));
    }
    let d = (f.len() / 2) as i64;
    let step = reduce_range(
        0,
        f.len(),
        &|i| {
            let fi = f[i];
            let s = 1.0 / (1.0 + fi.norm_sqr()).sqrt();
            NlftStep {
                a: LaurentPoly::constant(C64::new(s, 0.0)),
                b: LaurentPoly::monomial(i as i64 - d, fi * s),
            }
        },
        &|l: &NlftStep, r: &NlftStep| l.mul(r),
    );
    Ok((step.a, step.b))
}

/// `F_n = i·tan(ψ_{|n|})` for `n = -d..=d`.
pub fn nlft_sequence_from_phases(psi: &PhaseFactors) -> Vec<C64> {
    expand_reduced(psi)
        .into_iter()
        .map(|p| C64::new(0.0, p.tan()))
        .collect()
}
