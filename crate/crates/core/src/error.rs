//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point at or near the south pole (m3 = {0})")]
    SouthPole(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("shooting bracket does not classify: {0}")]
    ShootingBracket(String),
    #[error("profile evaluated at negative radius {0}")]
    NegativeRadius(f64),
    #[error("vortex centre outside the domain: {0}")]
    VortexOutsideDomain(String),
    #[error("operator {tag} is not defined on {symmetry} grids")]
    RegimeMismatch { tag: &'static str, symmetry: &'static str },
    #[error("linear solve failed: {0}")]
    LinearSolve(String),
    #[error("krylov stagnation: relative residual {0:.3e}")]
    KrylovStagnation(f64),
    #[error("newton did not converge after {iters} iterations (residual {residual:.3e})")]
    NewtonDivergence { iters: usize, residual: f64 },
    #[error("no sign change of c(d) on [{d_lo}, {d_hi}]: c = {c_lo:.6e}, {c_hi:.6e}")]
    NoSignChange { d_lo: f64, d_hi: f64, c_lo: f64, c_hi: f64 },
    #[error("no root of the reduced equation: {0}")]
    NoRoot(String),
    #[error("zero of the field on the winding loop")]
    ZeroOnLoop,
    #[error("evaluation point outside the stored domain: ({0}, {1})")]
    OutOfDomain(f64, f64),
    #[error("sampling spacing {spacing} is coarser than the lattice spacing {h}")]
    Unresolved { spacing: f64, h: f64 },
    #[error("config error: {0}")]
    Config(String),
    #[error("field format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
