//! Curve geometry: arc length, level-surface normal, tangent, and the
//! estimation angle.
//!
//! The curve ξ_t moves at constant speed √S₂, so the arc length is
//! s(t) = √S₂ · t. Slicing the Hilbert space by level surfaces of the
//! estimator expectation, the unit normal at ξ is
//!
//! ```text
//! n̂ = (ξT + Tξ − 2tξ) / √(2(ΔT² + δT²))
//! ```
//!
//! the unit tangent is ê₁ = −i[H, ξ]/√(2(ΔH² − δH²)), and the estimation
//! angle satisfies cos θ = 1/(2√((ΔT² + δT²)(ΔH² − δH²))). That formula
//! presumes a locally unbiased estimator, d⟨T⟩/dt = 1. A raw T generally
//! responds at some other rate c = tr((ξT + Tξ)ξ′); in the self-consistent
//! mode (the default for the CLI) T is rescaled by 1/c first, after which
//! the two ways of computing θ — the closed formula and the direct inner
//! product of n̂ with ê₁ — agree and the arccos argument cannot leave
//! [−1, 1]. Without the rescaling, an argument above 1 means the supplied
//! T is not a valid unbiased-estimator configuration and is reported as
//! `InvalidGeometry`.

use crate::error::{Error, Result};
use crate::linalg::{
    expectation, hs_inner, principal_sqrt, re_trace_product, CMatrix, Complex64, DensityMatrix,
    HermitianOperator,
};
use crate::moments::{skew_info_second_kind, wy_skew_information, SkewMomentTable};
use crate::derivative::state_derivative;

/// Slack allowed on the arccos argument before the configuration is
/// rejected as invalid geometry.
pub const ARCCOS_SLACK: f64 = 1e-9;

/// Arc length s(t) = √S₂ · t of the unitary curve.
pub fn arc_length(table: &SkewMomentTable, t: f64) -> Result<f64> {
    let s2 = table.moment(2)?;
    Ok(s2.max(0.0).sqrt() * t)
}

/// Geometry of the estimation configuration at one point of the curve.
#[derive(Debug, Clone)]
pub struct GeometricReport {
    /// s(t) for the parameter value used in the mean adjustment.
    pub arc_length: f64,
    /// Estimation angle from the closed formula, radians in [0, π/2].
    pub angle: f64,
    /// arccos(⟨n̂, ê₁⟩) computed from the explicit vectors.
    pub direct_angle: f64,
    /// |angle − direct_angle|.
    pub residual: f64,
    /// Unit normal to the level surface.
    pub normal: HermitianOperator,
    /// Unit tangent of the curve.
    pub tangent: HermitianOperator,
    /// Raw estimator response d⟨T⟩/dt = tr((ξT + Tξ)ξ′) before any
    /// rescaling; 1 for a locally unbiased estimator.
    pub response: f64,
}

/// Compute the estimation geometry for estimator T along the curve
/// generated by H at state ρ.
///
/// `t_value` is the expectation value used in the mean adjustment
/// (default tr(Tρ)). With `normalize_response` set, T is rescaled to unit
/// response first; see the module docs.
pub fn estimation_angle(
    t_op: &HermitianOperator,
    rho: &DensityMatrix,
    h: &HermitianOperator,
    t_value: Option<f64>,
    normalize_response: bool,
) -> Result<GeometricReport> {
    if t_op.dim() != rho.dim() || h.dim() != rho.dim() {
        return Err(Error::DimMismatch {
            left: t_op.dim().max(h.dim()),
            right: rho.dim(),
        });
    }
    let scale_h = 1.0 + h.spectral_norm();
    let scale_t = 1.0 + t_op.spectral_norm();

    let wy = wy_skew_information(h, rho)?;
    if wy <= 1e-12 * scale_h * scale_h {
        return Err(Error::DegenerateSurface {
            quantity: "Wigner-Yanase skew information of H",
        });
    }
    let skew2_raw = skew_info_second_kind(t_op, rho)?;
    if skew2_raw <= 1e-12 * scale_t * scale_t {
        return Err(Error::DegenerateSurface {
            quantity: "skew information of the second kind of T",
        });
    }

    let xi = principal_sqrt(rho)?;
    let xi1 = state_derivative(&xi, h, 1)?;

    // d<T>/dt = tr((xi T + T xi) xi').
    let txi = t_op.matrix() * xi.matrix();
    let sym = &txi + txi.adjoint();
    let response = re_trace_product(&sym, xi1.matrix());

    let (t_eff, t_mean, skew2) = if normalize_response {
        if response.abs() <= 1e-12 * scale_t * scale_h {
            return Err(Error::InvalidGeometry {
                reason: format!(
                    "estimator response d<T>/dt = {response:.3e} vanishes; \
                     T cannot be normalized to a locally unbiased estimator"
                ),
            });
        }
        let c = Complex64::new(1.0 / response, 0.0);
        let t_eff = HermitianOperator::wrap(t_op.matrix() * c);
        let mean = t_value.unwrap_or(expectation(t_op, rho)?) / response;
        (t_eff, mean, skew2_raw / (response * response))
    } else {
        let mean = t_value.unwrap_or(expectation(t_op, rho)?);
        (t_op.clone(), mean, skew2_raw)
    };

    // Gradient of the level surface, xi T + T xi - 2 t xi, normalized by
    // its actual Hilbert-Schmidt norm (= sqrt(2 skew2) when the mean is
    // self-consistent).
    let txi_eff = t_eff.matrix() * xi.matrix();
    let grad = &txi_eff + txi_eff.adjoint()
        - xi.matrix() * Complex64::new(2.0 * t_mean, 0.0);
    let grad_op = HermitianOperator::wrap(grad);
    let grad_norm_sq = hs_inner(&grad_op, &grad_op)?;
    if grad_norm_sq <= 1e-24 * (scale_t * scale_t) {
        return Err(Error::DegenerateSurface {
            quantity: "level-surface gradient",
        });
    }
    let normal = HermitianOperator::wrap(
        grad_op.matrix() / Complex64::new(grad_norm_sq.sqrt(), 0.0),
    );

    let tangent_norm_sq = hs_inner(&xi1, &xi1)?;
    if tangent_norm_sq <= 1e-24 * scale_h * scale_h {
        return Err(Error::DegenerateSurface {
            quantity: "curve velocity",
        });
    }
    let tangent = HermitianOperator::wrap(
        xi1.matrix() / Complex64::new(tangent_norm_sq.sqrt(), 0.0),
    );

    let cos_formula = 1.0 / (2.0 * (skew2 * wy).sqrt());
    if cos_formula > 1.0 + ARCCOS_SLACK {
        return Err(Error::InvalidGeometry {
            reason: format!(
                "(dT^2 + deltaT^2)(dH^2 - deltaH^2) = {:.6e} < 1/4; the supplied \
                 estimator is not a valid unbiased configuration for this family",
                skew2 * wy
            ),
        });
    }
    let angle = cos_formula.clamp(-1.0, 1.0).acos();
    let direct_cos = hs_inner(&normal, &tangent)?;
    let direct_angle = direct_cos.clamp(-1.0, 1.0).acos();

    Ok(GeometricReport {
        arc_length: (2.0 * wy).sqrt() * t_value.unwrap_or(expectation(t_op, rho)?),
        angle,
        direct_angle,
        residual: (angle - direct_angle).abs(),
        normal,
        tangent,
        response,
    })
}

/// Estimator whose level-surface normal is parallel to the curve tangent
/// at ρ: the Hermitian solution T of ξT + Tξ = ξ′. Requires a
/// full-rank state. Useful for constructing minimum-uncertainty
/// configurations in tests and demos.
pub fn minimum_uncertainty_estimator(
    rho: &DensityMatrix,
    h: &HermitianOperator,
) -> Result<HermitianOperator> {
    let xi = principal_sqrt(rho)?;
    let xi1 = state_derivative(&xi, h, 1)?;
    let (vals, vecs) = xi.operator().eigh();
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 1e-12 {
        return Err(Error::InvalidInput(
            "minimum-uncertainty estimator needs a full-rank state".into(),
        ));
    }
    // Sylvester equation in the eigenbasis of xi: T_ij = M_ij / (s_i + s_j).
    let m = vecs.adjoint() * xi1.matrix() * &vecs;
    let d = rho.dim();
    let t_eig = CMatrix::from_fn(d, d, |i, j| m[(i, j)] / Complex64::new(vals[i] + vals[j], 0.0));
    Ok(HermitianOperator::wrap(&vecs * t_eig * vecs.adjoint()))
}
