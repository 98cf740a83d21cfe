//! The higher-order uncertainty bound ladder.
//!
//! Each odd order n contributes a term Uₙ²/Nₙ to the lower bound
//!
//! ```text
//! ΔT² + δT² ≥ (1/2) Σ_{n=1,3,5,…} Uₙ²/Nₙ
//! ```
//!
//! where the frame norm Nₙ = D_{2n}/D_{2n−4} is a ratio of Hankel
//! determinants of skew moments (D_{−2} = 1) and the numerator Uₙ follows
//! the recursion Uₙ = (−1)^{(n−1)/2} n S_{n−1} − Σ_k F_{n,k} U_k with
//! U₁ = 1. Truncating at n = 1 recovers the first-order bound
//! 1/(2S₂) = 1/(4(ΔH² − δH²)).
//!
//! In finite dimension the odd derivatives ξ⁽¹⁾, ξ⁽³⁾, … lose linear
//! independence (every qubit does so immediately after n = 1). When a
//! determinant falls to the rank tolerance the ladder truncates *before*
//! that row and raises the saturation flag; a term with Nₙ ≈ 0 is never
//! emitted.

use nalgebra::DMatrix;

use crate::derivative::{binomial, DerivativeSet};
use crate::error::{Error, Result};
use crate::linalg::re_trace_product;
use crate::moments::{central_moment, skew_moment_closed_form, SkewMomentTable};
use crate::linalg::{DensityMatrix, HermitianOperator};

/// Base rank tolerance; scaled by the homogeneity degree of the quantity
/// it guards (a determinant of degree g compares against TOL_RANK·scaleᵍ).
pub const TOL_RANK: f64 = 1e-10;
/// Default ladder depth (odd truncation order). Uses moments through S₁₀.
pub const DEFAULT_LADDER_DEPTH: usize = 5;
/// Largest supported depth. Depth 7 consumes moments through S₁₄, whose
/// Hankel matrices are already noticeably ill-conditioned in double
/// precision; interpret rows beyond n = 5 with care.
pub const MAX_LADDER_DEPTH: usize = 7;

/// Homogeneity degree of D_{2n} in the spectrum of H: a ((n+1)/2)² block of
/// moments with total order (n+1)²/2 in every determinant term.
fn hankel_degree(n: usize) -> i32 {
    (((n + 1) * (n + 1)) / 2) as i32
}

/// Scale-aware rank tolerance for a degree-g homogeneous quantity.
pub fn rank_tolerance(scale: f64, degree: i32) -> f64 {
    TOL_RANK * scale.max(1.0).powi(degree)
}

fn require_odd(n: usize) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "ladder orders are odd; got {n}"
        )));
    }
    Ok(())
}

fn hankel_matrix(table: &SkewMomentTable, n: usize) -> Result<DMatrix<f64>> {
    let p = n.div_ceil(2);
    let mut m = DMatrix::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            m[(i, j)] = table.moment(2 * n - 2 * i - 2 * j)?;
        }
    }
    Ok(m)
}

/// Hankel determinant D_{2n} of skew moments, by pivoted LU.
pub fn hankel_determinant(table: &SkewMomentTable, n: usize) -> Result<f64> {
    require_odd(n)?;
    let m = hankel_matrix(table, n)?;
    if m.nrows() == 1 {
        return Ok(m[(0, 0)]);
    }
    Ok(m.lu().determinant())
}

/// Frame norm Nₙ = D_{2n}/D_{2n−4}, with D_{−2} = 1.
pub fn frame_norm(table: &SkewMomentTable, n: usize) -> Result<f64> {
    require_odd(n)?;
    let d_prev = if n == 1 {
        1.0
    } else {
        hankel_determinant(table, n - 2)?
    };
    let tol = if n == 1 {
        0.0
    } else {
        rank_tolerance(table.scale(), hankel_degree(n - 2))
    };
    if d_prev <= tol {
        return Err(Error::RankSaturated {
            order: n,
            value: d_prev,
            tolerance: tol,
        });
    }
    Ok(hankel_determinant(table, n)? / d_prev)
}

/// Gram-Schmidt projection coefficient F_{n,k} of Ψ_k in Ψ_n, from the
/// determinant of the D_{2k} matrix with its first row replaced by
/// (S_{n+k}, S_{n+k−2}, …, S_{n+1}).
pub fn projection_coefficient(table: &SkewMomentTable, n: usize, k: usize) -> Result<f64> {
    require_odd(n)?;
    require_odd(k)?;
    if k + 2 > n {
        return Err(Error::InvalidInput(format!(
            "projection requires k <= n - 2, got n = {n}, k = {k}"
        )));
    }
    let d2k = if k == 1 {
        table.moment(2)?
    } else {
        hankel_determinant(table, k)?
    };
    let tol = rank_tolerance(table.scale(), hankel_degree(k));
    if d2k <= tol {
        return Err(Error::RankSaturated {
            order: k,
            value: d2k,
            tolerance: tol,
        });
    }
    let mut m = hankel_matrix(table, k)?;
    let p = k.div_ceil(2);
    for j in 0..p {
        m[(0, j)] = table.moment(n + k - 2 * j)?;
    }
    let det = if p == 1 { m[(0, 0)] } else { m.lu().determinant() };
    let sign = if ((n + k) / 2 + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * det / d2k)
}

/// Numerator Uₙ by the recursion Uₙ = (−1)^{(n−1)/2} n S_{n−1} − Σ F_{n,k} U_k.
pub fn numerator(table: &SkewMomentTable, n: usize) -> Result<f64> {
    require_odd(n)?;
    let mut us: Vec<(usize, f64)> = Vec::new();
    for order in (1..=n).step_by(2) {
        let sign = if ((order - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let mut u = sign * order as f64 * table.moment(order - 1)?;
        for &(k, uk) in &us {
            u -= projection_coefficient(table, order, k)? * uk;
        }
        us.push((order, u));
    }
    Ok(us.last().unwrap().1)
}

/// One accepted row of the bound ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderRow {
    /// Odd derivative order n.
    pub order: usize,
    /// Hankel determinant D_{2n}.
    pub determinant: f64,
    /// Frame norm Nₙ = D_{2n}/D_{2n−4}.
    pub norm: f64,
    /// Numerator Uₙ.
    pub numerator: f64,
    /// Contribution Uₙ²/Nₙ.
    pub term: f64,
    /// Cumulative bound (1/2) Σ up to this row.
    pub cumulative: f64,
}

/// The assembled ladder: accepted rows, the realized truncation order and
/// whether truncation was forced by rank saturation rather than the
/// requested depth.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundLadder {
    pub rows: Vec<LadderRow>,
    pub truncation_order: usize,
    pub saturation_flag: bool,
}

impl BoundLadder {
    /// The cumulative lower bound at the realized truncation.
    pub fn bound(&self) -> f64 {
        self.rows.last().map(|r| r.cumulative).unwrap_or(0.0)
    }
}

/// Assemble the ladder up to odd depth `k_max`.
///
/// Fails with `ZeroFisherInformation` when S₂ is at the rank tolerance
/// ([H, ρ] = 0: nothing to estimate). Rank saturation at a higher row
/// truncates the ladder and sets the flag instead of failing.
pub fn uncertainty_bound(table: &SkewMomentTable, k_max: usize) -> Result<BoundLadder> {
    require_odd(k_max)?;
    if k_max > MAX_LADDER_DEPTH {
        return Err(Error::OrderTooLarge {
            order: k_max,
            cap: MAX_LADDER_DEPTH,
        });
    }
    if 2 * k_max > table.max_order() {
        return Err(Error::MissingMoment { order: 2 * k_max });
    }
    let scale = table.scale();
    let s2 = table.moment(2)?;
    if s2 <= rank_tolerance(scale, 2) {
        return Err(Error::ZeroFisherInformation { s2 });
    }

    let mut rows: Vec<LadderRow> = Vec::new();
    let mut us: Vec<(usize, f64)> = Vec::new();
    let mut cumulative = 0.0;
    let mut saturated = false;
    let mut d_prev = 1.0;

    for n in (1..=k_max).step_by(2) {
        let det = hankel_determinant(table, n)?;
        if det <= rank_tolerance(scale, hankel_degree(n)) {
            saturated = true;
            break;
        }
        let norm = det / d_prev;
        if norm <= rank_tolerance(scale, 2 * n as i32) {
            saturated = true;
            break;
        }
        let sign = if ((n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let mut u = sign * n as f64 * table.moment(n - 1)?;
        for &(k, uk) in &us {
            u -= projection_coefficient(table, n, k)? * uk;
        }
        us.push((n, u));
        let term = u * u / norm;
        cumulative += 0.5 * term;
        rows.push(LadderRow {
            order: n,
            determinant: det,
            norm,
            numerator: u,
            term,
            cumulative,
        });
        d_prev = det;
    }

    let truncation_order = rows.last().map(|r| r.order).unwrap_or(0);
    Ok(BoundLadder {
        rows,
        truncation_order,
        saturation_flag: saturated,
    })
}

/// Closed third-order bound
/// (1/(4(ΔH² − δH²))) [1 + (S₄ − 3S₂²)² / (S₆S₂ − S₄²)].
pub fn third_order_bound(table: &SkewMomentTable) -> Result<f64> {
    let scale = table.scale();
    let s2 = table.moment(2)?;
    if s2 <= rank_tolerance(scale, 2) {
        return Err(Error::ZeroFisherInformation { s2 });
    }
    let s4 = table.moment(4)?;
    let s6 = table.moment(6)?;
    let d6 = s6 * s2 - s4 * s4;
    let tol = rank_tolerance(scale, hankel_degree(3));
    if d6 <= tol {
        return Err(Error::RankSaturated {
            order: 3,
            value: d6,
            tolerance: tol,
        });
    }
    let u3 = s4 - 3.0 * s2 * s2;
    Ok((1.0 + u3 * u3 / d6) / (2.0 * s2))
}

/// Third-order bound built from ordinary central moments,
/// (1/(4μ₂)) [1 + (μ₄ − 3μ₂²)² / (μ₆μ₂ − μ₄²)].
///
/// This is the pure-state comparison formula: even in the pure-state limit
/// the skew-moment bound [`third_order_bound`] does not reduce to it,
/// because S₄ and S₆ are not central moments.
pub fn third_order_central_bound(h: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    let mu2 = central_moment(h, rho, 2)?;
    let scale = 1.0 + h.spectral_norm();
    if mu2 <= rank_tolerance(scale, 2) {
        return Err(Error::ZeroFisherInformation { s2: mu2 });
    }
    let mu4 = central_moment(h, rho, 4)?;
    let mu6 = central_moment(h, rho, 6)?;
    let den = mu6 * mu2 - mu4 * mu4;
    let tol = rank_tolerance(scale, hankel_degree(3));
    if den <= tol {
        return Err(Error::RankSaturated {
            order: 3,
            value: den,
            tolerance: tol,
        });
    }
    let num = mu4 - 3.0 * mu2 * mu2;
    Ok((1.0 + num * num / den) / (4.0 * mu2))
}

/// Both sides of the estimator-independence identity for odd orders:
/// the T-free expansion of tr(ξ⁽²ᵐ⁺¹⁾(ξT + Tξ)), namely
///
/// ```text
/// Σ_{α=0}^{m} (−1)^{m+1−α} C(2m+1, α) ·
///   [α tr(H^{α−1} ξ H^{2m+1−α} ξ) − (2m+1−α) tr(H^{2m−α} ξ H^{α} ξ)]
/// ```
///
/// against (−1)^{m+2} (2m+1) S_{2m}. The two agree identically; the pair is
/// returned so callers can assert the residual at their own tolerance.
pub fn pairing_identity_check(dset: &DerivativeSet, m: usize) -> Result<(f64, f64)> {
    let n = 2 * m + 1;
    if n > dset.max_order() {
        return Err(Error::OrderTooLarge {
            order: n,
            cap: dset.max_order(),
        });
    }
    let xi = dset.xi().matrix();
    let powers = &dset.h_powers;
    let tp = |a: usize, b: usize| -> f64 {
        re_trace_product(&(&powers[a] * xi), &(&powers[b] * xi))
    };
    let mut lhs = 0.0;
    for alpha in 0..=m {
        let sign = if (m + 1 - alpha).is_multiple_of(2) { 1.0 } else { -1.0 };
        let coeff = sign * binomial(n, alpha);
        let first = if alpha == 0 {
            0.0
        } else {
            alpha as f64 * tp(alpha - 1, n - alpha)
        };
        let second = (n - alpha) as f64 * tp(2 * m - alpha, alpha);
        lhs += coeff * (first - second);
    }
    let s2m = skew_moment_closed_form(dset.hamiltonian(), dset.xi(), 2 * m)?;
    let rhs_sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let rhs = rhs_sign * n as f64 * s2m;
    Ok((lhs, rhs))
}
