//! Polynomial representations shared by the solvers.
//!
//! Two coordinate systems are in play. Targets are even polynomials in `x`,
//! stored by their Chebyshev coefficients `f(x) = Σ_j f̂_j T_{2j}(x)`. The
//! nonlinear Fourier side works with Laurent polynomials in `z = e^{2iθ}`
//! where `x = cos θ`, so that `T_{2j}(x) = (z^j + z^{-j}) / 2`.
//!
//! Laurent arithmetic is FFT backed. Transform sizes are always powers of two.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{QspError, Result};

pub type C64 = Complex64;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction))
}

/// Unnormalized forward transform, `X_k = Σ_m x_m e^{-2πi km/n}`.
pub(crate) fn fft_forward(buf: &mut [C64]) {
    if buf.len() > 1 {
        plan(buf.len(), FftDirection::Forward).process(buf);
    }
}

/// Unnormalized inverse transform, `x_m = Σ_k X_k e^{+2πi km/n}`.
pub(crate) fn fft_inverse(buf: &mut [C64]) {
    if buf.len() > 1 {
        plan(buf.len(), FftDirection::Inverse).process(buf);
    }
}

/// Linear convolution through a power-of-two FFT.
pub(crate) fn convolve_fft(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let n = out_len.next_power_of_two();
    let mut fa = zero_padded(a, n);
    let mut fb = zero_padded(b, n);
    fft_forward(&mut fa);
    fft_forward(&mut fb);
    let scale = 1.0 / n as f64;
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y * scale;
    }
    fft_inverse(&mut fa);
    fa.truncate(out_len);
    fa
}

/// Schoolbook convolution. Used for tiny operands and as a test oracle.
pub(crate) fn convolve_direct(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn zero_padded(src: &[C64], n: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[..src.len()].copy_from_slice(src);
    v
}

/// Chebyshev coefficients `(f̂_0, …, f̂_d)` of an even target
/// `f(x) = Σ_j f̂_j T_{2j}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebTarget {
    coeffs: Vec<f64>,
}

impl ChebTarget {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(QspError::InvalidArgument(
                "a target needs at least one coefficient".into(),
            ));
        }
        if let Some(j) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(QspError::InvalidArgument(format!(
                "coefficient {j} is not finite"
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(degree_half: usize) -> Self {
        Self {
            coeffs: vec![0.0; degree_half + 1],
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// `d`, half the polynomial degree.
    pub fn degree_half(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn one_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Evaluates `f(x)`; valid for any real `x`, meaningful on `[-1, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        // T_{2j}(x) = T_j(y) with y = 2x² - 1. The shifts y ± 1 are formed
        // from x directly so the recurrence stays accurate near y = ±1.
        let y = 2.0 * x * x - 1.0;
        if y > 0.5 {
            reinsch(&self.coeffs, 2.0 * (x - 1.0) * (x + 1.0), 1.0)
        } else if y < -0.5 {
            reinsch(&self.coeffs, 2.0 * x * x, -1.0)
        } else {
            clenshaw(&self.coeffs, y)
        }
    }

    /// `f(cos θ)` written as `Σ_j f̂_j cos(j·ω)` with `ω = 2θ`.
    fn eval_angle(&self, omega: f64) -> f64 {
        clenshaw(&self.coeffs, omega.cos())
    }

    /// Estimate of `max_{x ∈ [-1,1]} |f(x)|`.
    ///
    /// Samples the Chebyshev-extrema grid with at least `16d` points through
    /// one FFT, then polishes the largest local maxima with golden-section
    /// search on the exact Clenshaw evaluation.
    pub fn sup_norm(&self) -> f64 {
        let d = self.degree_half();
        if d == 0 {
            return self.coeffs[0].abs();
        }
        // ω = πm/M for m = 0..=M covers x² ∈ [0, 1].
        let m_pts = (16 * d).max(64).next_power_of_two();
        let n = 2 * m_pts;
        let mut buf = vec![C64::new(0.0, 0.0); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            buf[j].re = *c;
        }
        fft_inverse(&mut buf);
        let vals: Vec<f64> = buf[..=m_pts].iter().map(|v| v.re.abs()).collect();

        let mut best = vals.iter().cloned().fold(0.0, f64::max);
        let mut peaks: Vec<usize> = (0..=m_pts)
            .filter(|&m| {
                let left = if m == 0 { vals[1] } else { vals[m - 1] };
                let right = if m == m_pts {
                    vals[m_pts - 1]
                } else {
                    vals[m + 1]
                };
                vals[m] >= left && vals[m] >= right
            })
            .collect();
        peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        peaks.truncate(8);

        let step = std::f64::consts::PI / m_pts as f64;
        for m in peaks {
            let centre = m as f64 * step;
            let lo = (centre - step).max(0.0);
            let hi = (centre + step).min(std::f64::consts::PI);
            let v = golden_max(|w| self.eval_angle(w).abs(), lo, hi);
            best = best.max(v);
        }
        best
    }
}

/// `Σ_k a_k T_k(y)` by Clenshaw's recurrence.
pub(crate) fn clenshaw(a: &[f64], y: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ak in a.iter().skip(1).rev() {
        let b0 = ak + 2.0 * y * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    a.first().copied().unwrap_or(0.0) + y * b1 - b2
}

/// Reinsch's form of Clenshaw's recurrence for `y` near `sign = ±1`, with
/// `shift = y - sign` supplied by the caller.
fn reinsch(a: &[f64], shift: f64, sign: f64) -> f64 {
    // d_k = b_k - sign·b_{k+1}.
    let mut b1 = 0.0;
    let mut d1 = 0.0;
    for &ak in a.iter().skip(1).rev() {
        let d0 = ak + 2.0 * shift * b1 + sign * d1;
        b1 = d0 + sign * b1;
        d1 = d0;
    }
    a.first().copied().unwrap_or(0.0) + shift * b1 + sign * d1
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = f(lo).max(f(hi)).max(f1).max(f2);
    for _ in 0..100 {
        if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
            best = best.max(f2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
            best = best.max(f1);
        }
    }
    best
}

/// A Laurent polynomial `Σ_k c_k z^k` with `k` ranging over `lo..lo+len`.
#[derive(Debug, Clone)]
pub struct LaurentPoly {
    lo: i64,
    coeffs: Vec<C64>,
}

impl LaurentPoly {
    pub fn new(lo: i64, coeffs: Vec<C64>) -> Self {
        Self { lo, coeffs }
    }

    pub fn zero() -> Self {
        Self {
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: i64, c: C64) -> Self {
        Self {
            lo: k,
            coeffs: vec![c],
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest stored exponent; `lo - 1` for the empty polynomial.
    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    /// Number of stored coefficients, i.e. the width of the index window.
    pub fn width(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero outside the stored window.
    pub fn coeff(&self, k: i64) -> C64 {
        let idx = k - self.lo;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// Drops exactly-zero coefficients at both ends.
    pub fn trimmed(&self) -> Self {
        let zero = C64::new(0.0, 0.0);
        let Some(first) = self.coeffs.iter().position(|c| *c != zero) else {
            return Self::zero();
        };
        let last = self.coeffs.iter().rposition(|c| *c != zero).unwrap();
        Self {
            lo: self.lo + first as i64,
            coeffs: self.coeffs[first..=last].to_vec(),
        }
    }

    /// `p*(z) = conj(p(1 / conj z))`: the coefficient at `k` moves to `-k`
    /// and is conjugated.
    pub fn star(&self) -> Self {
        Self {
            lo: -self.hi(),
            coeffs: self.coeffs.iter().rev().map(|c| c.conj()).collect(),
        }
    }

    /// Conjugates every coefficient in place of the exponent (`p̄(t)`).
    pub fn conj_coeffs(&self) -> Self {
        Self {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() {
            return other.clone();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let coeffs = (lo..=hi).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self { lo, coeffs }
    }

    /// Direct evaluation at a complex point by Horner's rule.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.lo as i32)
    }

    /// Largest coefficient magnitude difference over the union of windows.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return 0.0;
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        let a = self.trimmed();
        let b = other.trimmed();
        a.coeffs == b.coeffs && (a.coeffs.is_empty() || a.lo == b.lo)
    }
}

/// Samples `values[m] = p(exp(2πi·m/n))` on the size-`n` unit-circle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitGridSamples {
    values: Vec<C64>,
}

impl UnitGridSamples {
    pub fn new(values: Vec<C64>) -> Result<Self> {
        if !values.len().is_power_of_two() {
            return Err(QspError::GridSize(values.len()));
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }
}

/// `b(z) = i·f(x)` under `x = cos θ`, `z = e^{2iθ}`; window `[-d, d]`.
pub fn cheb_to_laurent_b(target: &ChebTarget) -> LaurentPoly {
    let d = target.degree_half();
    let f = target.coeffs();
    let coeffs = (0..=2 * d)
        .map(|idx| {
            let j = idx.abs_diff(d);
            let v = if j == 0 { f[0] } else { 0.5 * f[j] };
            C64::new(0.0, v)
        })
        .collect();
    LaurentPoly::new(-(d as i64), coeffs)
}

/// Product of two Laurent polynomials via a power-of-two FFT.
pub fn laurent_mul(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    if p.coeffs.is_empty() || q.coeffs.is_empty() {
        return LaurentPoly::zero();
    }
    LaurentPoly::new(p.lo + q.lo, convolve_fft(&p.coeffs, &q.coeffs))
}

/// Evaluates `p` on the `n`-point unit-circle grid by one inverse FFT.
pub fn laurent_eval_grid(p: &LaurentPoly, n: usize) -> Result<UnitGridSamples> {
    if !n.is_power_of_two() {
        return Err(QspError::GridSize(n));
    }
    if p.width() > n {
        return Err(QspError::Alias {
            n,
            width: p.width(),
        });
    }
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for (i, c) in p.coeffs.iter().enumerate() {
        let k = (p.lo + i as i64).rem_euclid(n as i64) as usize;
        buf[k] += c;
    }
    fft_inverse(&mut buf);
    UnitGridSamples::new(buf)
}

/// Reads the coefficients with exponents `lo..lo+len` back from grid samples.
///
/// Exact when the window covers the true support; a narrower window simply
/// drops the coefficients outside it.
pub fn grid_to_laurent(samples: &UnitGridSamples, lo: i64, len: usize) -> Result<LaurentPoly> {
    let n = samples.n();
    if len > n {
        return Err(QspError::Alias { n, width: len });
    }
    let mut buf = samples.values.clone();
    fft_forward(&mut buf);
    let scale = 1.0 / n as f64;
    let coeffs = (0..len)
        .map(|i| buf[(lo + i as i64).rem_euclid(n as i64) as usize] * scale)
        .collect();
    Ok(LaurentPoly::new(lo, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_poly(rng: &mut ChaCha8Rng, lo: i64, len: usize) -> LaurentPoly {
        let coeffs = (0..len)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        LaurentPoly::new(lo, coeffs)
    }

    #[test]
    fn laurent_b_of_zero_is_zero() {
        let b = cheb_to_laurent_b(&ChebTarget::new(vec![0.0]).unwrap());
        assert_eq!(b, LaurentPoly::zero());
    }

    #[test]
    fn laurent_b_of_constant() {
        let b = cheb_to_laurent_b(&ChebTarget::new(vec![0.6]).unwrap());
        assert_eq!(b, LaurentPoly::constant(c(0.0, 0.6)));
    }

    #[test]
    fn laurent_b_of_t2() {
        let b = cheb_to_laurent_b(&ChebTarget::new(vec![0.0, 0.5]).unwrap());
        assert_eq!(b.lo(), -1);
        assert_eq!(b.coeff(-1), c(0.0, 0.25));
        assert_eq!(b.coeff(0), c(0.0, 0.0));
        assert_eq!(b.coeff(1), c(0.0, 0.25));
    }

    #[test]
    fn laurent_b_matches_target_on_circle() {
        let t = ChebTarget::new(vec![0.1, -0.2, 0.05, 0.3]).unwrap();
        let b = cheb_to_laurent_b(&t);
        for theta in [0.0, 0.3, 1.1, 2.5] {
            let z = C64::from_polar(1.0, 2.0 * theta);
            let want = t.eval(f64::cos(theta));
            let got = b.eval(z);
            assert!((got - c(0.0, want)).norm() < 1e-15);
        }
    }

    #[test]
    fn mul_difference_of_squares() {
        let p = LaurentPoly::new(0, vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let q = LaurentPoly::new(0, vec![c(1.0, 0.0), c(-1.0, 0.0)]);
        let r = laurent_mul(&p, &q);
        let want = LaurentPoly::new(0, vec![c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!(r.max_abs_diff(&want) < 1e-15);
        assert_eq!((r.lo(), r.hi()), (0, 2));
    }

    #[test]
    fn mul_by_one_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_poly(&mut rng, -3, 9);
        let r = laurent_mul(&p, &LaurentPoly::constant(c(1.0, 0.0)));
        assert_eq!((r.lo(), r.hi()), (p.lo(), p.hi()));
        assert!(r.max_abs_diff(&p) < 1e-15);
    }

    #[test]
    fn mul_matches_schoolbook_at_degree_64() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = random_poly(&mut rng, -20, 65);
        let q = random_poly(&mut rng, 7, 65);
        let r = laurent_mul(&p, &q);
        let oracle = LaurentPoly::new(p.lo() + q.lo(), convolve_direct(p.coeffs(), q.coeffs()));
        assert!(r.max_abs_diff(&oracle) < 1e-12);
        assert_eq!(r.lo(), -13);
        assert_eq!(r.hi(), p.hi() + q.hi());
    }

    #[test]
    fn eval_grid_constant_and_monomial() {
        let one = laurent_eval_grid(&LaurentPoly::constant(c(1.0, 0.0)), 8).unwrap();
        assert!(one
            .values()
            .iter()
            .all(|v| (*v - c(1.0, 0.0)).norm() < 1e-15));

        let z = laurent_eval_grid(&LaurentPoly::monomial(1, c(1.0, 0.0)), 4).unwrap();
        let want = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (g, w) in z.values().iter().zip(want) {
            assert!((g - w).norm() < 1e-15);
        }
    }

    #[test]
    fn eval_grid_matches_horner() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_poly(&mut rng, -11, 32);
        let n = 2 * p.width();
        let s = laurent_eval_grid(&p, n).unwrap();
        for (m, v) in s.values().iter().enumerate() {
            let z = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * m as f64 / n as f64);
            assert!((v - p.eval(z)).norm() < 1e-13);
        }
    }

    #[test]
    fn eval_grid_rejects_aliasing_and_bad_sizes() {
        let p = LaurentPoly::new(-2, vec![c(1.0, 0.0); 5]);
        assert_eq!(
            laurent_eval_grid(&p, 4),
            Err(QspError::Alias { n: 4, width: 5 })
        );
        assert_eq!(laurent_eval_grid(&p, 6), Err(QspError::GridSize(6)));
    }

    #[test]
    fn grid_to_laurent_constant() {
        let s = UnitGridSamples::new(vec![c(1.0, 0.0); 8]).unwrap();
        let p = grid_to_laurent(&s, 0, 1).unwrap();
        assert!(p.max_abs_diff(&LaurentPoly::constant(c(1.0, 0.0))) < 1e-15);
    }

    #[test]
    fn grid_round_trip_degree_16() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = random_poly(&mut rng, -8, 17);
        let s = laurent_eval_grid(&p, 64).unwrap();
        let back = grid_to_laurent(&s, p.lo(), p.width()).unwrap();
        assert!(back.max_abs_diff(&p) < 1e-13);
    }

    #[test]
    fn narrow_window_truncates() {
        let p = LaurentPoly::new(-1, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let s = laurent_eval_grid(&p, 8).unwrap();
        let back = grid_to_laurent(&s, 0, 2).unwrap();
        assert!((back.coeff(0) - c(2.0, 0.0)).norm() < 1e-15);
        assert!((back.coeff(1) - c(3.0, 0.0)).norm() < 1e-15);
        assert_eq!(back.coeff(-1), c(0.0, 0.0));
    }

    #[test]
    fn fft_round_trip_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 1 << 20;
        let vals: Vec<C64> = (0..n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut buf = vals.clone();
        fft_forward(&mut buf);
        fft_inverse(&mut buf);
        let scale = 1.0 / n as f64;
        let norm: f64 = vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let err: f64 = vals
            .iter()
            .zip(&buf)
            .map(|(a, b)| (a - b * scale).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err / norm < 1e-13, "relative error {err}");
    }

    #[test]
    fn trimming_and_equality() {
        let p = LaurentPoly::new(-2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let t = p.trimmed();
        assert_eq!((t.lo(), t.width()), (-1, 1));
        assert_eq!(p, LaurentPoly::monomial(-1, c(1.0, 0.0)));
        assert_ne!(p, LaurentPoly::monomial(0, c(1.0, 0.0)));
    }

    #[test]
    fn sup_norm_of_t2_combination() {
        // f = 0.3 + 0.2·T_2 peaks at |x| = 1 with value 0.5.
        let t = ChebTarget::new(vec![0.3, 0.2]).unwrap();
        assert!((t.sup_norm() - 0.5).abs() < 1e-15);
        // f = 0.1 - 0.4·T_4 reaches 0.5 at T_4 = -1.
        let t = ChebTarget::new(vec![0.1, 0.0, -0.4]).unwrap();
        assert!((t.sup_norm() - 0.5).abs() < 1e-14);
    }

    fn poly_strategy(max_len: usize) -> impl Strategy<Value = LaurentPoly> {
        (
            -40i64..40,
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..max_len),
        )
            .prop_map(|(lo, cs)| {
                LaurentPoly::new(lo, cs.into_iter().map(|(a, b)| c(a, b)).collect())
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn mul_commutes(p in poly_strategy(513), q in poly_strategy(513)) {
            let pq = laurent_mul(&p, &q);
            let qp = laurent_mul(&q, &p);
            prop_assert!(pq.max_abs_diff(&qp) < 1e-12);
        }

        #[test]
        fn star_distributes_over_products(p in poly_strategy(129), q in poly_strategy(129)) {
            let lhs = laurent_mul(&p, &q).star();
            let rhs = laurent_mul(&p.star(), &q.star());
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn star_is_an_involution(p in poly_strategy(65)) {
            prop_assert_eq!(p.star().star(), p);
        }

        #[test]
        fn laurent_b_is_skew_and_palindromic(cs in prop::collection::vec(-1.0f64..1.0, 1..40)) {
            let b = cheb_to_laurent_b(&ChebTarget::new(cs).unwrap());
            let neg_star = b.star().scale(c(-1.0, 0.0));
            prop_assert!(b.max_abs_diff(&neg_star) <= 1e-15);
            let d = b.hi();
            for k in 0..=d {
                prop_assert!((b.coeff(k) - b.coeff(-k)).norm() <= 1e-15);
                prop_assert_eq!(b.coeff(k).re, 0.0);
            }
        }
    }
}
