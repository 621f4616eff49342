//! Phase factors for quantum signal processing.
//!
//! Given an even target `f(x) = Σ_j f̂_j T_{2j}(x)` with `‖f‖_∞ < 1`, find
//! the symmetric phase sequence whose QSP unitary has `Im p(x) = f(x)`. Two
//! solvers are provided:
//!
//! * [`hc_phase_factors`] (Half Cholesky): Weiss construction of `b/a`
//!   followed by a displacement-structure Schur LDL, `O(d²)` after the FFTs.
//!   Works all the way into the fully-coherent regime.
//! * [`fpi_solve`] with [`Evaluator::Fast`] (FFPI): fixed point iteration
//!   driven by an `O(d log² d)` product-tree evaluator.
//!
//! Slow reference routes ([`eval_direct`], [`rhw_reference_phase`],
//! [`Evaluator::Direct`]) are kept for verification.

// Guards are written `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fpi;
pub mod half_cholesky;
pub mod poly;
pub mod qsp;
pub mod targets;
pub mod weiss;

pub use error::{QspError, Result};
pub use fpi::{check_convergence_domain, fpi_solve, FpiConfig, SolveReport, CONVERGENCE_BOUND};
pub use half_cholesky::{
    build_p, hc_phase_factors, schur_generators, schur_ldl_halfsolve, schur_ldl_halfsolve_dense,
    GeneratorPair, HalfCholResult,
};
pub use poly::{
    cheb_to_laurent_b, grid_to_laurent, laurent_eval_grid, laurent_mul, ChebTarget, LaurentPoly,
    UnitGridSamples, C64,
};
pub use qsp::{
    eval_direct, eval_direct_cheb, eval_fast_cheb, expand_reduced, nlft_forward,
    nlft_sequence_from_phases, qsp_map, qsp_product, Evaluator, PhaseFactors, Su2LaurentPair,
};
pub use targets::{hamsim_target, random_target, HamSimSpec, TargetFile};
pub use weiss::{rhw_phase_factors, rhw_reference_phase, weiss, WeissConfig, WeissResult};

/// Chebyshev residual `‖F(Ψ) - f̂‖_∞` measured with the direct evaluator.
pub fn direct_residual(psi: &PhaseFactors, target: &ChebTarget) -> f64 {
    qsp_map(psi, Evaluator::Direct)
        .iter()
        .zip(target.coeffs())
        .map(|(q, f)| (q - f).abs())
        .fold(0.0, f64::max)
}
