use thiserror::Error;

/// Errors raised by the SL(2) geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Sl2Error {
    #[error("matrix is not in SL(2): det = {det} (tolerance {tol})")]
    NotUnimodular { det: f64, tol: f64 },

    #[error("matrix is not traceless: trace = {trace}")]
    NotTraceless { trace: f64 },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The direction angle φ cannot be recovered because m(β, t) vanishes.
    #[error("direction is undetermined: m(beta, t) = {m}")]
    UndeterminedDirection { m: f64 },

    #[error("root bracket [{lo}, {hi}] has no sign change (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// The log-map search found no admissible geodesic reaching the target.
    #[error("no minimizing geodesic found in the search box (best residual {best_residual:e})")]
    SearchFailure { best_residual: f64 },
}

pub type Result<T> = std::result::Result<T, Sl2Error>;
