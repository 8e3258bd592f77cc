//! Coherent-state quantization on compact Lie groups, realized numerically for SU(2).
//!
//! The library builds the structure theory of a compact simple group (Killing form,
//! Cartan data, irreducible representations), a band-limited harmonic truncation of
//! L^2(G), and the quantization map that compresses multiplication operators onto a
//! coherent ground space. Two stochastic representations of the resulting semigroup
//! are implemented and cross-checked: a Feynman-Kac average over group-valued
//! Brownian motion, and the rough-path limit of measures on smooth paths.

pub mod linalg;
pub mod lie;
pub mod repr;
pub mod harmonic;
pub mod quantization;
pub mod su2;
pub mod brownian;
pub mod rough;
pub mod harness;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("only rank-1 groups are supported here: {0}")]
    UnsupportedRank(String),
    #[error("weight is not dominant integral: {0}")]
    NonDominantWeight(String),
    #[error("root space construction failed: {0}")]
    RootSpaceDegeneracy(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix logarithm failed: {0}")]
    LogFailure(String),
    #[error("harmonic cutoff too small: {0}")]
    CutoffTooSmall(String),
    #[error("no eigenvectors within tol {tol} of level {level}")]
    EmptyEigenspace { level: f64, tol: f64 },
    #[error("matrix is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("one-form is not it*-valued: {0}")]
    FormNotImaginary(String),
    #[error("requested time {0} is not on the step grid")]
    TimeOffGrid(f64),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("ODE step size underflow at t = {0}")]
    OdeStepUnderflow(f64),
    #[error("config parse error at line {line}: {msg}")]
    ConfigParse { line: usize, msg: String },
    #[error("config field error: {0}")]
    ConfigField(String),
    #[error("estimated resource need {need} exceeds limit {limit}")]
    ResourceLimit { need: String, limit: String },
    #[error("empty schedule: {0}")]
    EmptySchedule(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
