//! Brute-force verification path: explicit Gram-Schmidt frames in the real
//! vector space of Hermitian operators.
//!
//! Everything the closed formulas claim — frame norms as determinant
//! ratios, projection coefficients, the numerator recursion, the Parseval
//! decomposition of the gradient norm — is recomputed here from first
//! principles: vectorize Hermitian operators over an orthonormal operator
//! basis, run modified Gram-Schmidt with one full reorthogonalization pass
//! over the derivative sequence, complete the frame to all d² dimensions,
//! and project. Derivative sequences are Krylov-like and lose independence
//! fast, hence the mandatory reorthogonalization.

use crate::derivative::DerivativeSet;
use crate::error::{Error, Result};
use crate::linalg::{
    hs_inner, re_trace_product, CMatrix, Complex64, HermitianOperator, SqrtState,
};
use crate::moments::skew_moment_oracle;

/// Default saturation threshold on the post/pre orthogonalization norm²
/// ratio: the square of the 1e-10 cross-check tolerance on norms.
pub const SATURATION_TOL: f64 = 1e-20;

/// Orthonormal basis of the d²-dimensional real space of Hermitian
/// operators: d diagonal units, then for each i < j the pair
/// (E_ij + E_ji)/√2 and i(E_ij − E_ji)/√2.
#[derive(Debug, Clone)]
pub struct RealVectorization {
    dim: usize,
    basis: Vec<HermitianOperator>,
}

impl RealVectorization {
    pub fn new(dim: usize) -> Self {
        let mut basis = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            basis.push(HermitianOperator::wrap(CMatrix::from_fn(dim, dim, |r, c| {
                if r == i && c == i {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })));
        }
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        for i in 0..dim {
            for j in (i + 1)..dim {
                basis.push(HermitianOperator::wrap(CMatrix::from_fn(dim, dim, |r, c| {
                    if (r, c) == (i, j) || (r, c) == (j, i) {
                        Complex64::new(inv_sqrt2, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })));
                basis.push(HermitianOperator::wrap(CMatrix::from_fn(dim, dim, |r, c| {
                    if (r, c) == (i, j) {
                        Complex64::new(0.0, inv_sqrt2)
                    } else if (r, c) == (j, i) {
                        Complex64::new(0.0, -inv_sqrt2)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })));
            }
        }
        Self { dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[HermitianOperator] {
        &self.basis
    }

    /// Real coordinates of A over the basis, extracted entrywise.
    pub fn coords(&self, a: &HermitianOperator) -> Result<Vec<f64>> {
        if a.dim() != self.dim {
            return Err(Error::DimMismatch {
                left: a.dim(),
                right: self.dim,
            });
        }
        let m = a.matrix();
        let sqrt2 = 2.0_f64.sqrt();
        let mut v = Vec::with_capacity(self.dim * self.dim);
        for i in 0..self.dim {
            v.push(m[(i, i)].re);
        }
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                v.push(sqrt2 * m[(i, j)].re);
                v.push(sqrt2 * m[(i, j)].im);
            }
        }
        Ok(v)
    }

    /// Rebuild the operator from coordinates.
    pub fn from_coords(&self, v: &[f64]) -> Result<HermitianOperator> {
        if v.len() != self.dim * self.dim {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                self.dim * self.dim,
                v.len()
            )));
        }
        let d = self.dim;
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = Complex64::new(v[i], 0.0);
        }
        let mut idx = d;
        for i in 0..d {
            for j in (i + 1)..d {
                let re = v[idx] * inv_sqrt2;
                let im = v[idx + 1] * inv_sqrt2;
                idx += 2;
                m[(i, j)] = Complex64::new(re, im);
                m[(j, i)] = Complex64::new(re, -im);
            }
        }
        Ok(HermitianOperator::wrap(m))
    }
}

/// An orthogonal (not normalized) frame of Hermitian operators with its
/// squared norms. `source_orders[k]` records the derivative order vector k
/// came from; completion vectors carry `None`.
#[derive(Debug, Clone)]
pub struct OrthogonalFrame {
    pub vectors: Vec<HermitianOperator>,
    pub norms: Vec<f64>,
    pub source_orders: Vec<Option<usize>>,
    /// Derivative orders dropped because orthogonalization collapsed them.
    pub saturated_orders: Vec<usize>,
}

impl OrthogonalFrame {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Index of the frame vector sourced from derivative order n.
    pub fn position_of_order(&self, n: usize) -> Option<usize> {
        self.source_orders.iter().position(|&o| o == Some(n))
    }
}

/// Project `v` orthogonal to every vector in the frame, twice (modified
/// Gram-Schmidt with one full reorthogonalization pass).
fn orthogonalize_against(
    v: &mut CMatrix,
    vectors: &[HermitianOperator],
    norms: &[f64],
) {
    for _pass in 0..2 {
        for (w, &nsq) in vectors.iter().zip(norms.iter()) {
            let coeff = re_trace_product(v, w.matrix()) / nsq;
            *v -= w.matrix() * Complex64::new(coeff, 0.0);
        }
    }
}

/// Gram-Schmidt frame over the derivative sequence of `dset`.
///
/// With `odd_only` set, only ξ⁽¹⁾, ξ⁽³⁾, … are consumed (the odd frame of
/// the bound ladder); otherwise the full sequence starting at ξ itself.
/// A vector whose post-orthogonalization norm² falls to `tol` times its
/// pre-orthogonalization norm² is recorded as saturated and dropped —
/// saturation is data, not an error.
pub fn build_frame(
    dset: &DerivativeSet,
    max_n: usize,
    odd_only: bool,
    tol: f64,
) -> Result<OrthogonalFrame> {
    if max_n > dset.max_order() {
        return Err(Error::OrderTooLarge {
            order: max_n,
            cap: dset.max_order(),
        });
    }
    let orders: Vec<usize> = if odd_only {
        (1..=max_n).step_by(2).collect()
    } else {
        (0..=max_n).collect()
    };
    let mut frame = OrthogonalFrame {
        vectors: Vec::new(),
        norms: Vec::new(),
        source_orders: Vec::new(),
        saturated_orders: Vec::new(),
    };
    for n in orders {
        let mut v = dset.derivative(n)?.matrix().clone();
        let pre: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        orthogonalize_against(&mut v, &frame.vectors, &frame.norms);
        let post: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if post <= tol * pre || pre == 0.0 {
            frame.saturated_orders.push(n);
        } else {
            frame.vectors.push(HermitianOperator::wrap(v));
            frame.norms.push(post);
            frame.source_orders.push(Some(n));
        }
    }
    Ok(frame)
}

/// Extend a frame to a full orthogonal basis of the d² Hermitian
/// dimensions by appending canonical vectorization basis elements in fixed
/// order, orthogonalizing each, and dropping the near-null residues.
pub fn complete_frame(frame: &OrthogonalFrame, vec: &RealVectorization) -> Result<OrthogonalFrame> {
    let mut out = frame.clone();
    let target = vec.dim() * vec.dim();
    for e in vec.basis() {
        if out.vectors.len() == target {
            break;
        }
        let mut v = e.matrix().clone();
        orthogonalize_against(&mut v, &out.vectors, &out.norms);
        let post: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if post > SATURATION_TOL {
            out.vectors.push(HermitianOperator::wrap(v));
            out.norms.push(post);
            out.source_orders.push(None);
        }
    }
    if out.vectors.len() != target {
        return Err(Error::IncompleteFrame {
            detail: format!(
                "completion produced {} of {} vectors",
                out.vectors.len(),
                target
            ),
        });
    }
    Ok(out)
}

/// Completeness probe: over an exact frame, every canonical basis element
/// must satisfy Σ_a ⟨e, Ψ_a⟩²/‖Ψ_a‖² = 1. Returns the worst residual.
fn completeness_residual(frame: &OrthogonalFrame, vec: &RealVectorization) -> Result<f64> {
    let mut worst = 0.0_f64;
    for e in vec.basis() {
        let mut total = 0.0;
        for (w, &nsq) in frame.vectors.iter().zip(frame.norms.iter()) {
            let c = hs_inner(e, w)?;
            total += c * c / nsq;
        }
        worst = worst.max((total - 1.0).abs());
    }
    Ok(worst)
}

/// Parseval decomposition of the squared gradient norm over a complete
/// frame: the list of terms (1/2)⟨∇t, Ψ_a⟩²/‖Ψ_a‖², whose sum equals
/// ΔT² + δT². The mean adjustment uses t = tr(Tξ²).
pub fn parseval_decomposition(
    t_op: &HermitianOperator,
    xi: &SqrtState,
    full_frame: &OrthogonalFrame,
) -> Result<Vec<f64>> {
    if t_op.dim() != xi.dim() {
        return Err(Error::DimMismatch {
            left: t_op.dim(),
            right: xi.dim(),
        });
    }
    let vec = RealVectorization::new(xi.dim());
    let residual = completeness_residual(full_frame, &vec)?;
    if residual > 1e-10 {
        return Err(Error::IncompleteFrame {
            detail: format!("Parseval probe residual {residual:.3e}"),
        });
    }
    let txi = t_op.matrix() * xi.matrix();
    let mean = re_trace_product(t_op.matrix(), &(xi.matrix() * xi.matrix()));
    let grad = &txi + txi.adjoint() - xi.matrix() * Complex64::new(2.0 * mean, 0.0);
    let mut terms = Vec::with_capacity(full_frame.len());
    for (w, &nsq) in full_frame.vectors.iter().zip(full_frame.norms.iter()) {
        let c = re_trace_product(&grad, w.matrix());
        terms.push(0.5 * c * c / nsq);
    }
    Ok(terms)
}

/// Reconstruct the ladder numerator U_{2m+1} without the determinant
/// formulas: substitute the estimator-independent pairing value
/// (−1)^{m+2}(2m+1)S_{2m} for each tr((ξT + Tξ)ξ⁽ⁿ⁾) and subtract the
/// Gram-Schmidt projections measured on the brute-force frame. The skew
/// moments themselves are taken from the derivative route, so nothing here
/// touches the closed forms being verified.
pub fn numerator_oracle(dset: &DerivativeSet, frame: &OrthogonalFrame, m: usize) -> Result<f64> {
    let n = 2 * m + 1;
    if n > dset.max_order() {
        return Err(Error::OrderTooLarge {
            order: n,
            cap: dset.max_order(),
        });
    }
    // Pairing value for each odd derivative order, from oracle moments.
    let pairing = |j: usize| -> Result<f64> {
        let s2j = if j == 0 {
            1.0
        } else {
            skew_moment_oracle(dset, 2 * j - 1, 1)?
        };
        let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(sign * (2 * j + 1) as f64 * s2j)
    };
    let mut us: Vec<(usize, f64)> = Vec::new();
    for k in (1..=n).step_by(2) {
        frame.position_of_order(k).ok_or(Error::RankSaturated {
            order: k,
            value: 0.0,
            tolerance: SATURATION_TOL,
        })?;
        let mut u = pairing((k - 1) / 2)?;
        for &(j, uj) in &us {
            let pos_j = frame.position_of_order(j).ok_or(Error::RankSaturated {
                order: j,
                value: 0.0,
                tolerance: SATURATION_TOL,
            })?;
            let f = re_trace_product(
                dset.derivative(k)?.matrix(),
                frame.vectors[pos_j].matrix(),
            ) / frame.norms[pos_j];
            u -= f * uj;
        }
        us.push((k, u));
    }
    Ok(us.last().unwrap().1)
}
