use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("2F1({a}, {b}; {c}; 1) diverges: c - a - b = {gap} <= 0")]
    Divergence { a: f64, b: f64, c: f64, gap: f64 },

    #[error("series did not reach tolerance within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("alpha = {alpha} >= d + 1 = {}: operator is not compact on L^2", .d + 1)]
    Supercritical { alpha: f64, d: u32 },

    #[error("alpha = {alpha} > 1: operator is not in the Macaev ideal L^(1,inf)")]
    NotInMacaev1 { alpha: f64 },

    #[error("alpha = {alpha} >= 1: operator is not trace class")]
    NotTraceClass { alpha: f64 },

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("quadrature grid too coarse: two-grid difference {difference:e} exceeds {limit:e}")]
    GridTooCoarse { difference: f64, limit: f64 },

    #[error("asymptotic fit is ambiguous (slope {slope:.4})")]
    AmbiguousFit { slope: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
