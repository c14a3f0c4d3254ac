use thiserror::Error;

use crate::algebra::Rat;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular (det = {det})")]
    Singular { det: Rat },

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("recurrence order must be at least 2, got {0}")]
    OrderTooSmall(usize),

    #[error("gamma_0 must be nonzero")]
    ZeroGamma,

    #[error("initial vectors are linearly dependent: Δ = {delta} ({detail})")]
    DependentInitials { delta: Rat, detail: String },

    #[error("expected order {expected}, got {found}")]
    Arity { expected: usize, found: usize },

    #[error("root approximation did not reach {target:e}; best bound {achieved:e}")]
    Precision { target: f64, achieved: f64 },

    #[error("factorization certification failed: residual {residual:e} exceeds {tolerance:e}")]
    Certification { residual: f64, tolerance: f64 },

    #[error("fitting system is underdetermined: rank {rank} < {unknowns} unknowns")]
    Underdetermined { rank: usize, unknowns: usize },

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("family is not integral: {0}")]
    NonIntegral(String),

    #[error("invalid rational {0:?}")]
    ParseRational(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
