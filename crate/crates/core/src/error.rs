use thiserror::Error;

/// Errors raised by the solvers and the polynomial machinery underneath them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QspError {
    #[error("grid of size {n} cannot hold a Laurent window of width {width} without aliasing")]
    Alias { n: usize, width: usize },

    #[error("grid size {0} is not a power of two")]
    GridSize(usize),

    #[error("evaluation point {0} lies outside [-1, 1]")]
    Domain(f64),

    #[error("phase sequence of length {0} has odd degree; only n = 2d is supported")]
    UnsupportedParity(usize),

    #[error("target sup norm {norm} exceeds the admissible bound {bound}")]
    NormViolation { norm: f64, bound: f64 },

    #[error("Weiss grid reached {max_grid} points without converging (last change {change:e}, tail mass {tail:e})")]
    GridExhausted {
        max_grid: usize,
        change: f64,
        tail: f64,
    },

    #[error("Hankel system for k = {k} is singular")]
    SingularSystem { k: usize },

    #[error("coefficient c_{index} has real part {re:e}; expected purely imaginary")]
    NotImaginary { index: usize, re: f64 },

    #[error("Schur recursion broke down at step {k} (pivot {pivot:e})")]
    Breakdown { k: usize, pivot: f64 },

    #[error("fixed point iteration diverged at iteration {iteration} (residual {residual:e})")]
    Divergence { iteration: usize, residual: f64 },

    #[error(
        "fixed point iteration stopped after {iterations} iterations with residual {residual:e}"
    )]
    MaxIterReached { iterations: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, QspError>;
