//! Complex Hermitian matrix foundation.
//!
//! Everything downstream works in the real Hilbert space of Hermitian
//! operators under the trace inner product ⟨A, B⟩ = tr(AB). This module owns
//! the validated wrapper types:
//!
//! - [`HermitianOperator`] — a d×d complex matrix with A = A†,
//! - [`DensityMatrix`] — Hermitian, positive semidefinite, unit trace,
//! - [`SqrtState`] — a Hermitian square root ξ with tr(ξ²) = 1,
//!
//! together with the primitive operations: principal matrix square root,
//! Hilbert-Schmidt inner product, unitary evolution ξ_t = e^{−iHt} ξ e^{iHt}
//! and expectation values. All operations are pure; values are immutable
//! after construction and safe to share across threads.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;
pub type CMatrix = DMatrix<Complex64>;

/// Hermiticity check: |A − A†|_max ≤ tol · (1 + |A|_max).
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Density-matrix trace check: |tr ρ − 1| ≤ tol.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue a density matrix may carry (numerical PSD drift).
pub const EIGENVALUE_FLOOR: f64 = -1e-12;
/// Eigenvalues of ρ at or below this fraction of λ_max are clamped to 0
/// before taking the square root.
pub const SQRT_CLAMP_RATIO: f64 = 1e-14;
/// Square-root state normalization check: |tr(ξ²) − 1| ≤ tol.
pub const SQRT_NORM_TOL: f64 = 1e-10;
/// Purity threshold for treating a state as pure: tr(ρ²) > 1 − tol.
pub const PURITY_TOL: f64 = 1e-12;

/// Largest entry modulus of a complex matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Re tr(AB), summed elementwise without forming the product.
pub(crate) fn re_trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.nrows(), b.nrows());
    let d = a.nrows();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            let x = a[(i, j)];
            let y = b[(j, i)];
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

/// (M + M†)/2. Exact for already-Hermitian input; used to strip roundoff
/// from operations that preserve hermiticity analytically.
pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    let d = m.nrows();
    CMatrix::from_fn(d, d, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

fn check_square_finite(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// A validated Hermitian operator on a d-dimensional complex space.
///
/// Construction symmetrizes the stored matrix to (A + A†)/2 once the input
/// passes the hermiticity tolerance, so downstream arithmetic sees an
/// exactly Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMatrix,
}

impl HermitianOperator {
    pub fn new(mat: CMatrix) -> Result<Self> {
        check_square_finite(&mat)?;
        let dev = max_abs(&(&mat - mat.adjoint()));
        let tol = HERMITICITY_TOL * (1.0 + max_abs(&mat));
        if dev > tol {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance: tol,
            });
        }
        Ok(Self {
            mat: hermitian_part(&mat),
        })
    }

    /// Wrap a matrix that is Hermitian by construction.
    pub(crate) fn wrap(mat: CMatrix) -> Self {
        debug_assert!(max_abs(&(&mat - mat.adjoint())) <= 1e-9 * (1.0 + max_abs(&mat)));
        Self {
            mat: hermitian_part(&mat),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: CMatrix::zeros(dim, dim),
        }
    }

    /// Build from a real symmetric array of entries (imaginary parts zero).
    pub fn from_real(entries: &[f64], dim: usize) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let m = CMatrix::from_fn(dim, dim, |i, j| Complex64::new(entries[i * dim + j], 0.0));
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Spectral norm (largest eigenvalue modulus).
    pub fn spectral_norm(&self) -> f64 {
        let (vals, _) = self.eigh();
        vals.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Eigendecomposition A = V diag(λ) V†, eigenvalues ascending,
    /// eigenvectors as the columns of V.
    pub fn eigh(&self) -> (Vec<f64>, CMatrix) {
        let d = self.dim();
        let se = self.mat.clone().symmetric_eigen();
        let mut idx: Vec<usize> = (0..d).collect();
        idx.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
        let vals: Vec<f64> = idx.iter().map(|&k| se.eigenvalues[k]).collect();
        let vecs = CMatrix::from_fn(d, d, |i, j| se.eigenvectors[(i, idx[j])]);
        (vals, vecs)
    }

    /// Re tr(A), with the imaginary part exactly zero for Hermitian storage.
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }
}

/// A mixed-state density matrix: Hermitian, PSD within [`EIGENVALUE_FLOOR`],
/// unit trace within [`TRACE_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalized { trace: tr });
        }
        let (vals, _) = op.eigh();
        if let Some(&min) = vals.first() {
            if min < EIGENVALUE_FLOOR {
                return Err(Error::NotPositive { eigenvalue: min });
            }
        }
        Ok(Self { op })
    }

    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(mat)?)
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    /// tr(ρ²) = Σ |ρ_ij|².
    pub fn purity(&self) -> f64 {
        self.op.matrix().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Pure-state detection: tr(ρ²) > 1 − [`PURITY_TOL`].
    pub fn is_pure(&self) -> bool {
        self.purity() > 1.0 - PURITY_TOL
    }
}

/// A Hermitian square root ξ of a density matrix, tr(ξ²) = 1.
///
/// The library computes with the principal (PSD) root from
/// [`principal_sqrt`]; any other Hermitian root of ρ can be supplied through
/// [`SqrtState::new`], which validates nothing beyond hermiticity and the
/// unit Hilbert-Schmidt norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SqrtState {
    op: HermitianOperator,
}

impl SqrtState {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let norm_sq: f64 = op.matrix().iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > SQRT_NORM_TOL {
            return Err(Error::NotUnitNorm { norm_sq });
        }
        Ok(Self { op })
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    /// The density matrix ξ².
    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_matrix(self.matrix() * self.matrix())
    }
}

/// Principal Hermitian square root of a density matrix.
///
/// Eigenvalues of ρ below `SQRT_CLAMP_RATIO · λ_max` are treated as exactly
/// zero before the square root so PSD drift cannot produce complex roots.
pub fn principal_sqrt(rho: &DensityMatrix) -> Result<SqrtState> {
    let (vals, vecs) = rho.operator().eigh();
    let lam_max = vals.iter().cloned().fold(0.0, f64::max);
    let clamp = SQRT_CLAMP_RATIO * lam_max;
    let mut roots = Vec::with_capacity(vals.len());
    for &v in &vals {
        if v < EIGENVALUE_FLOOR {
            return Err(Error::NotPositive { eigenvalue: v });
        }
        roots.push(if v <= clamp { 0.0 } else { v.sqrt() });
    }
    let d = rho.dim();
    let diag = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(roots[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let xi = &vecs * diag * vecs.adjoint();
    SqrtState::new(HermitianOperator::wrap(xi))
}

/// Hilbert-Schmidt inner product Re tr(AB) of two Hermitian operators.
///
/// For Hermitian inputs tr(AB) is real; the residual imaginary part is
/// checked in debug builds.
pub fn hs_inner(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let re = re_trace_product(a.matrix(), b.matrix());
    #[cfg(debug_assertions)]
    {
        let d = a.dim();
        let mut im = 0.0;
        for i in 0..d {
            for j in 0..d {
                let x = a.matrix()[(i, j)];
                let y = b.matrix()[(j, i)];
                im += x.re * y.im + x.im * y.re;
            }
        }
        let scale = 1.0 + re.abs() + max_abs(a.matrix()) * max_abs(b.matrix()) * d as f64;
        debug_assert!(
            im.abs() <= 1e-12 * scale,
            "imaginary trace residue {im} for Hermitian inputs"
        );
    }
    Ok(re)
}

/// Unitary evolution ξ_t = e^{−iHt} ξ_0 e^{iHt}.
///
/// The exponential is computed through the eigendecomposition of H, which is
/// exact for Hermitian H up to eigensolver error.
pub fn evolve(xi0: &SqrtState, h: &HermitianOperator, t: f64) -> Result<SqrtState> {
    if xi0.dim() != h.dim() {
        return Err(Error::DimMismatch {
            left: xi0.dim(),
            right: h.dim(),
        });
    }
    let d = h.dim();
    let (vals, vecs) = h.eigh();
    let phases = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, -vals[i] * t)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let u = &vecs * phases * vecs.adjoint();
    let xi_t = &u * xi0.matrix() * u.adjoint();
    SqrtState::new(HermitianOperator::wrap(xi_t))
}

/// Expectation value Re tr(Aρ).
pub fn expectation(a: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    if a.dim() != rho.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: rho.dim(),
        });
    }
    Ok(re_trace_product(a.matrix(), rho.matrix()))
}
