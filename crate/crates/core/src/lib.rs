//! Generalized uncertainty lower bounds for parameter estimation along
//! unitary families of mixed states.
//!
//! A state ρ evolving as ρ_t = e^{−iHt} ρ₀ e^{iHt} is embedded into the
//! real Hilbert space of Hermitian operators through a square root
//! ξ with ξ² = ρ. In that space the estimation error of an unbiased
//! estimator T is measured by the skew information of the second kind,
//! and the Fisher information is twice the Wigner-Yanase skew information
//! of H. Higher even-order analogues of those quantities — the quantum
//! skew moments S₂, S₄, … — assemble into a ladder of successively
//! tighter lower bounds through Hankel determinants and a numerator
//! recursion.
//!
//! The crate keeps two independent routes to every quantity: closed
//! formulas in the [`moments`] and [`ladder`] modules, and a brute-force
//! Gram-Schmidt path in [`oracle`] that never touches the closed forms.
//! The test suites cross-check the two at tight tolerances.
//!
//! Modules:
//!
//! - [`linalg`] — validated Hermitian/density/square-root types,
//!   eigendecomposition, principal square root, evolution.
//! - [`derivative`] — the commutator-binomial derivatives ξ⁽ⁿ⁾ of the
//!   curve and their trace inner products.
//! - [`moments`] — skew informations, skew moments (closed form and
//!   derivative oracle), central moments.
//! - [`ladder`] — Hankel determinants, frame norms, numerator recursion,
//!   the truncated bound, the third-order closed form, and the
//!   estimator-independence identity.
//! - [`geometry`] — arc length, level-surface normal, tangent and the
//!   estimation angle.
//! - [`oracle`] — operator vectorization, Gram-Schmidt frames, frame
//!   completion, Parseval decomposition, numerator reconstruction.
//! - [`sample`] — pinned seeded sampling of Ginibre states and GUE
//!   Hamiltonians.
//! - [`io`] — JSON schemas for matrices and instances.

#![forbid(unsafe_code)]

pub mod derivative;
pub mod error;
pub mod geometry;
pub mod io;
pub mod ladder;
pub mod linalg;
pub mod moments;
pub mod oracle;
pub mod sample;

pub use derivative::{finite_difference_check, state_derivative, DerivativeSet, ORDER_CAP};
pub use error::{Error, Result};
pub use geometry::{arc_length, estimation_angle, minimum_uncertainty_estimator, GeometricReport};
pub use io::{InstanceFile, MatrixJson, ValidatedInstance};
pub use ladder::{
    frame_norm, hankel_determinant, numerator, pairing_identity_check, projection_coefficient,
    third_order_bound, third_order_central_bound, uncertainty_bound, BoundLadder, LadderRow,
    DEFAULT_LADDER_DEPTH, MAX_LADDER_DEPTH, TOL_RANK,
};
pub use linalg::{
    evolve, expectation, hs_inner, principal_sqrt, CMatrix, Complex64, DensityMatrix,
    HermitianOperator, SqrtState,
};
pub use moments::{
    central_moment, grad_norm_sq, skew_info_second_kind, skew_moment_closed_form,
    skew_moment_oracle, wy_skew_information, SkewMomentTable,
};
pub use oracle::{
    build_frame, complete_frame, numerator_oracle, parseval_decomposition, OrthogonalFrame,
    RealVectorization, SATURATION_TOL,
};
pub use sample::{child_seed, ginibre_state, gue_hamiltonian, random_unitary, SplitMix64};
