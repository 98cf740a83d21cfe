//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by matrix validation, moment evaluation and the bound ladder.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: |A - A^dag| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("state is not positive semidefinite: eigenvalue {eigenvalue:.3e}")]
    NotPositive { eigenvalue: f64 },

    #[error("state trace {trace} differs from 1 beyond tolerance")]
    NotNormalized { trace: f64 },

    #[error("square-root state has tr(xi^2) = {norm_sq}, expected 1")]
    NotUnitNorm { norm_sq: f64 },

    #[error("order {order} exceeds the configured cap {cap}")]
    OrderTooLarge { order: usize, cap: usize },

    #[error("order {order} is odd; skew moments exist only at even orders")]
    OddOrder { order: usize },

    #[error("derivative order sum {sum} is odd; the inner product vanishes identically")]
    OddOrderSum { sum: usize },

    #[error("skew-moment table has no entry at order {order}")]
    MissingMoment { order: usize },

    #[error(
        "derivative frame is rank-saturated at order {order}: \
         determinant {value:.3e} is at or below tolerance {tolerance:.3e}"
    )]
    RankSaturated {
        order: usize,
        value: f64,
        tolerance: f64,
    },

    #[error("zero Fisher information: S_2 = {s2:.3e} (the Hamiltonian commutes with the state)")]
    ZeroFisherInformation { s2: f64 },

    #[error("degenerate level surface: {quantity} vanishes")]
    DegenerateSurface { quantity: &'static str },

    #[error("invalid estimator geometry: {reason}")]
    InvalidGeometry { reason: String },

    #[error("frame is not complete: {detail}")]
    IncompleteFrame { detail: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
