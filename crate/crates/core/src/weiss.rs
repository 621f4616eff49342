//! Complementary outer function and the Laurent coefficients of `b/a`.
//!
//! Given `b(z) = i·f(x)`, the outer `a` with `|a|² = 1 - |b|²` on the circle is
//! `a = exp(G)`, where `G` keeps the constant mode of `R = ½·log(1 - |b|²)`,
//! doubles its negative modes and drops the positive ones. Then `a` is a
//! series in `z⁻¹` with `a(∞) = exp(R̂_0) > 0`, and `b/a = Σ_{k ≤ d} c_k z^k`.
//! Everything runs on a unit-circle grid whose size doubles until the
//! coefficients `c_0..c_d` stop moving.

use nalgebra::DMatrix;

use crate::error::{QspError, Result};
use crate::poly::{
    cheb_to_laurent_b, fft_forward, fft_inverse, laurent_eval_grid, ChebTarget, LaurentPoly,
    UnitGridSamples, C64,
};
use crate::qsp::PhaseFactors;

/// Default hard cap on the Weiss grid.
pub const DEFAULT_MAX_GRID: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeissConfig {
    /// Lower bound on `1 - ‖f‖_∞`.
    pub eta: f64,
    /// Target accuracy for the coefficients `c_k`.
    pub eps: f64,
    /// Largest grid the doubling loop may reach.
    pub max_grid: usize,
}

impl WeissConfig {
    pub fn new(eta: f64, eps: f64) -> Result<Self> {
        let cfg = Self {
            eta,
            eps,
            max_grid: DEFAULT_MAX_GRID,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_max_grid(mut self, max_grid: usize) -> Self {
        self.max_grid = max_grid;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(QspError::InvalidArgument(format!(
                "eta must lie in (0, 1), got {}",
                self.eta
            )));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(QspError::InvalidArgument(format!(
                "eps must lie in (0, 1), got {}",
                self.eps
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct WeissResult {
    /// `c_0, …, c_d`, purely imaginary up to rounding.
    pub c: Vec<C64>,
    /// Grid size `N` of the accepted pass.
    pub grid_size: usize,
    /// `max | |a|² + |b|² - 1 |` over the grid.
    pub residual_unitarity: f64,
    /// `Σ_{d < k ≤ N/2} |ĉ_k|²`, the aliased mass of `b/a` above degree `d`.
    pub tail_mass: f64,
    /// Largest grid coefficient of `a` at a strictly positive exponent.
    pub outer_leak: f64,
}

/// Grid samples of `b` and of its outer complement `a`.
#[derive(Debug, Clone)]
pub struct OuterPair {
    pub a: UnitGridSamples,
    pub b: UnitGridSamples,
}

/// Builds the outer complement of `b` on the `n`-point grid.
///
/// Fails with [`QspError::NormViolation`] when `1 - |b|²` drops below the
/// margin implied by `eta` anywhere on the grid.
pub fn outer_complement(b: &LaurentPoly, n: usize, eta: f64) -> Result<OuterPair> {
    let bs = laurent_eval_grid(b, n)?;
    let floor = eta * (2.0 - eta) * (1.0 - 1e-3);
    let mut log_mod = Vec::with_capacity(n);
    for v in bs.values() {
        let gap = 1.0 - v.norm_sqr();
        log_mod.push(C64::new(0.5 * gap.ln(), 0.0));
        if !(gap >= floor) {
            return Err(QspError::NormViolation {
                norm: v.norm(),
                bound: 1.0 - eta,
            });
        }
    }

    fft_forward(&mut log_mod);
    let scale = 1.0 / n as f64;
    let half = n / 2;
    for (k, v) in log_mod.iter_mut().enumerate() {
        let w = match k {
            0 => 1.0,
            k if k == half => 1.0,
            k if k < half => 0.0,
            _ => 2.0,
        };
        *v *= w * scale;
    }
    fft_inverse(&mut log_mod);
    let a = log_mod.into_iter().map(|g| g.exp()).collect();
    Ok(OuterPair {
        a: UnitGridSamples::new(a)?,
        b: bs,
    })
}

struct GridPass {
    c: Vec<C64>,
    residual: f64,
    tail: f64,
    leak: f64,
}

fn weiss_pass(b: &LaurentPoly, d: usize, n: usize, eta: f64) -> Result<GridPass> {
    let OuterPair { a, b: bs } = outer_complement(b, n, eta)?;
    let scale = 1.0 / n as f64;

    let residual = a
        .values()
        .iter()
        .zip(bs.values())
        .map(|(x, y)| (x.norm_sqr() + y.norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max);

    let mut ratio: Vec<C64> = bs
        .values()
        .iter()
        .zip(a.values())
        .map(|(y, x)| y / x)
        .collect();
    fft_forward(&mut ratio);
    let c = ratio[..=d].iter().map(|v| v * scale).collect();
    let tail = ratio[d + 1..=n / 2]
        .iter()
        .map(|v| (v * scale).norm_sqr())
        .sum();

    let mut a_hat = a.into_values();
    fft_forward(&mut a_hat);
    let leak = a_hat[1..n / 2]
        .iter()
        .map(|v| (v * scale).norm())
        .fold(0.0, f64::max);

    Ok(GridPass {
        c,
        residual,
        tail,
        leak,
    })
}

/// Smallest grid tried by [`weiss`].
pub fn initial_grid(d: usize) -> usize {
    (8 * (d + 1)).max(64).next_power_of_two()
}

/// Laurent coefficients `c_0, …, c_d` of `b/a` for `b = i·f`.
///
/// The grid doubles until two consecutive passes agree on every `c_k` to
/// `eps·max(1, ‖c‖_∞)` and the aliased tail mass is below `eps`.
pub fn weiss(target: &ChebTarget, cfg: &WeissConfig) -> Result<WeissResult> {
    cfg.validate()?;
    let norm = target.sup_norm();
    let bound = 1.0 - cfg.eta;
    if norm > bound * (1.0 + 1e-12) {
        return Err(QspError::NormViolation { norm, bound });
    }
    let d = target.degree_half();
    let b = cheb_to_laurent_b(target);

    let mut n = initial_grid(d);
    if n > cfg.max_grid {
        return Err(QspError::GridExhausted {
            max_grid: cfg.max_grid,
            change: f64::INFINITY,
            tail: f64::INFINITY,
        });
    }
    let mut prev = weiss_pass(&b, d, n, cfg.eta)?;
    loop {
        if 2 * n > cfg.max_grid {
            return Err(QspError::GridExhausted {
                max_grid: cfg.max_grid,
                change: f64::NAN,
                tail: prev.tail,
            });
        }
        n *= 2;
        let next = weiss_pass(&b, d, n, cfg.eta)?;
        let size = next.c.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let change = next
            .c
            .iter()
            .zip(&prev.c)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        if change <= cfg.eps * size && next.tail <= cfg.eps {
            return Ok(WeissResult {
                c: next.c,
                grid_size: n,
                residual_unitarity: next.residual,
                tail_mass: next.tail,
                outer_leak: next.leak,
            });
        }
        if 2 * n > cfg.max_grid {
            return Err(QspError::GridExhausted {
                max_grid: cfg.max_grid,
                change,
                tail: next.tail,
            });
        }
        prev = next;
    }
}

/// Phase `ψ_k` from the dense block Hankel system of the Riemann–Hilbert
/// factorization. `O((d-k)³)`; meant as a small-scale reference.
pub fn rhw_reference_phase(c: &[C64], k: usize) -> Result<f64> {
    let d = c
        .len()
        .checked_sub(1)
        .ok_or_else(|| QspError::InvalidArgument("need at least one coefficient".into()))?;
    if k > d {
        return Err(QspError::InvalidArgument(format!(
            "index {k} exceeds degree {d}"
        )));
    }
    let m = d + 1 - k;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    // Ξ_k[i][j] = c_{k+i+j}, zero past c_d.
    let hankel = |i: usize, j: usize| {
        let idx = k + i + j;
        if idx <= d {
            c[idx]
        } else {
            zero
        }
    };
    let sys = DMatrix::from_fn(2 * m, 2 * m, |r, s| {
        let (bi, i) = (r / m, r % m);
        let (bj, j) = (s / m, s % m);
        if bi == bj {
            if i == j {
                one
            } else {
                zero
            }
        } else {
            -hankel(i, j)
        }
    });
    let mut rhs = nalgebra::DVector::from_element(2 * m, zero);
    rhs[0] = one;
    let sol = sys.lu().solve(&rhs).ok_or(QspError::SingularSystem { k })?;
    let (a0, b0) = (sol[0], sol[m]);
    if !(a0.norm() > 0.0) || !a0.re.is_finite() {
        return Err(QspError::SingularSystem { k });
    }
    let t = C64::new(0.0, -1.0) * b0 / a0;
    Ok(t.re.atan())
}

/// All reduced phases through [`rhw_reference_phase`].
pub fn rhw_phase_factors(c: &[C64]) -> Result<PhaseFactors> {
    let psi = (0..c.len())
        .map(|k| rhw_reference_phase(c, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseFactors::new(psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::grid_to_laurent;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(eta: f64) -> WeissConfig {
        WeissConfig::new(eta, 1e-14).unwrap()
    }

    #[test]
    fn zero_target() {
        let t = ChebTarget::new(vec![0.0]).unwrap();
        let r = weiss(&t, &cfg(0.5)).unwrap();
        assert_eq!(r.c, vec![C64::new(0.0, 0.0)]);
        let pair = outer_complement(&cheb_to_laurent_b(&t), 64, 0.5).unwrap();
        assert!(pair.a.values().iter().all(|v| (*v - 1.0).norm() < 1e-16));
    }

    #[test]
    fn constant_target() {
        let t = ChebTarget::new(vec![0.6]).unwrap();
        let r = weiss(&t, &cfg(0.3)).unwrap();
        // a = √(1 - 0.36) = 0.8, so b/a = 0.6i / 0.8.
        assert!((r.c[0] - C64::new(0.0, 0.75)).norm() < 1e-15);
    }

    #[test]
    fn constant_target_padded_degree() {
        let t = ChebTarget::new(vec![0.6, 0.0, 0.0]).unwrap();
        let r = weiss(&t, &cfg(0.3)).unwrap();
        assert!((r.c[0] - C64::new(0.0, 0.75)).norm() < 1e-15);
        assert!(r.c[1].norm() < 1e-15 && r.c[2].norm() < 1e-15);
    }

    #[test]
    fn t2_target_invariants() {
        let t = ChebTarget::new(vec![0.0, 0.5]).unwrap();
        let r = weiss(&t, &cfg(0.4)).unwrap();
        assert!(r.residual_unitarity < 1e-12);
        assert!(r.c.iter().all(|v| v.re.abs() < 1e-10));
    }

    /// Long division of `b` by the outer series `a(z) = Σ_j α_j z^{-j}`.
    #[test]
    fn ratio_matches_long_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let d = 6;
        let raw: Vec<f64> = (0..=d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s: f64 = raw.iter().map(|v| v.abs()).sum();
        let t = ChebTarget::new(raw.iter().map(|v| 0.6 * v / s).collect()).unwrap();
        let r = weiss(&t, &cfg(0.35)).unwrap();

        let b = cheb_to_laurent_b(&t);
        let n = r.grid_size;
        let pair = outer_complement(&b, n, 0.35).unwrap();
        let len = n / 2;
        let a_series = grid_to_laurent(&pair.a, -(len as i64) + 1, len).unwrap();
        let alpha: Vec<C64> = (0..len).map(|j| a_series.coeff(-(j as i64))).collect();
        assert!(alpha[0].im.abs() < 1e-15 && alpha[0].re > 0.0);

        // b = z^d·B(w) with w = 1/z; γ = B/A as a power series in w.
        let terms = 400;
        let big_b: Vec<C64> = (0..terms).map(|m| b.coeff(d as i64 - m as i64)).collect();
        let mut gamma = vec![C64::new(0.0, 0.0); terms];
        for m in 0..terms {
            let mut acc = big_b[m];
            for j in 1..=m.min(len - 1) {
                acc -= alpha[j] * gamma[m - j];
            }
            gamma[m] = acc / alpha[0];
        }
        for k in 0..=d {
            assert!((r.c[k] - gamma[d - k]).norm() < 1e-12, "k = {k}");
        }

        for _ in 0..10 {
            let z = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            let w = z.inv();
            let mut series = C64::new(0.0, 0.0);
            let mut wp = C64::new(1.0, 0.0);
            for g in &gamma {
                series += g * wp;
                wp *= w;
            }
            let series = series * z.powi(d as i32);
            let a_val: C64 = alpha
                .iter()
                .rev()
                .fold(C64::new(0.0, 0.0), |acc, c| acc * w + c);
            let direct = b.eval(z) / a_val;
            assert!((series - direct).norm() < 1e-11);
        }
    }

    #[test]
    fn outer_function_has_no_positive_modes() {
        let t = ChebTarget::new(vec![0.2, -0.3, 0.25]).unwrap();
        let r = weiss(&t, &cfg(0.2)).unwrap();
        assert!(r.outer_leak <= 1e-10, "leak {}", r.outer_leak);
    }

    #[test]
    fn energy_bound() {
        let eta = 0.25;
        let t = ChebTarget::new(vec![0.3, 0.25, -0.2]).unwrap();
        assert!(t.sup_norm() <= 1.0 - eta);
        let r = weiss(&t, &cfg(eta)).unwrap();
        let energy: f64 = r.c.iter().map(|v| v.norm_sqr()).sum();
        assert!(energy <= 1.0 / eta - 1.0);
    }

    #[test]
    fn norm_violation_is_reported() {
        let t = ChebTarget::new(vec![0.95]).unwrap();
        assert!(matches!(
            weiss(&t, &cfg(0.1)),
            Err(QspError::NormViolation { .. })
        ));
    }

    #[test]
    fn grid_cap_is_enforced() {
        let t = ChebTarget::new(vec![0.0, 0.5]).unwrap();
        let cfg = cfg(0.4).with_max_grid(64);
        assert!(matches!(
            weiss(&t, &cfg),
            Err(QspError::GridExhausted { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(WeissConfig::new(0.0, 1e-12).is_err());
        assert!(WeissConfig::new(0.5, 1.5).is_err());
    }

    #[test]
    fn rhw_one_by_one() {
        let psi = rhw_reference_phase(&[C64::new(0.0, 0.75)], 0).unwrap();
        assert!((psi - 0.643_501_108_793_284_4).abs() < 1e-15);
    }

    #[test]
    fn rhw_zero_coefficients() {
        let c = vec![C64::new(0.0, 0.0); 5];
        for k in 0..5 {
            assert_eq!(rhw_reference_phase(&c, k).unwrap(), 0.0);
        }
    }

    #[test]
    fn rhw_singular_system() {
        // A real c_0 = 1 gives [[1, -1], [-1, 1]].
        assert_eq!(
            rhw_reference_phase(&[C64::new(1.0, 0.0)], 0),
            Err(QspError::SingularSystem { k: 0 })
        );
    }
}
