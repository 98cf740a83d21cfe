//! Derivative operators of the unitary curve ξ_t = e^{−iHt} ξ₀ e^{iHt}.
//!
//! The n-th derivative has the closed commutator-binomial form
//!
//! ```text
//! ξ⁽ⁿ⁾ = (−i)ⁿ Σ_{k=0}^{n} (−1)ᵏ C(n,k) H^{n−k} ξ Hᵏ
//! ```
//!
//! which this module evaluates directly rather than by repeated
//! commutators, so no error accumulates across orders. Binomial
//! coefficients are exact integers. Trace inner products tr(ξ⁽ᵐ⁾ξ⁽ⁿ⁾)
//! vanish identically when m + n is odd; that cancellation is verified by
//! tests, never assumed.

use crate::error::{Error, Result};
use crate::linalg::{evolve, hermitian_part, max_abs, re_trace_product, CMatrix, Complex64, HermitianOperator, SqrtState};

/// Default cap on derivative / moment orders.
pub const ORDER_CAP: usize = 16;

/// Exact binomial coefficient, as f64. Orders ≤ 16 are far below the
/// integer range where this could lose precision.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

/// Powers H⁰..H^max, computed once and shared.
pub(crate) fn power_table(h: &CMatrix, max: usize) -> Vec<CMatrix> {
    let d = h.nrows();
    let mut powers = Vec::with_capacity(max + 1);
    powers.push(CMatrix::identity(d, d));
    for k in 1..=max {
        let next = &powers[k - 1] * h;
        powers.push(next);
    }
    powers
}

fn derivative_from_powers(powers: &[CMatrix], xi: &CMatrix, n: usize) -> HermitianOperator {
    let d = xi.nrows();
    let mut sum = CMatrix::zeros(d, d);
    for k in 0..=n {
        let term = &powers[n - k] * xi * &powers[k];
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += term * Complex64::new(sign * binomial(n, k), 0.0);
    }
    // (−i)^n cycles through 1, −i, −1, i.
    let phase = match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    HermitianOperator::wrap(sum * phase)
}

/// ξ⁽ⁿ⁾ for a single order.
pub fn state_derivative(xi: &SqrtState, h: &HermitianOperator, n: usize) -> Result<HermitianOperator> {
    if xi.dim() != h.dim() {
        return Err(Error::DimMismatch {
            left: xi.dim(),
            right: h.dim(),
        });
    }
    if n > ORDER_CAP {
        return Err(Error::OrderTooLarge {
            order: n,
            cap: ORDER_CAP,
        });
    }
    let powers = power_table(h.matrix(), n);
    Ok(derivative_from_powers(&powers, xi.matrix(), n))
}

/// All derivatives ξ⁽⁰⁾..ξ⁽ᵐᵃˣ⁾ of one curve, with the H power table
/// computed once. Immutable after construction.
#[derive(Debug, Clone)]
pub struct DerivativeSet {
    xi: SqrtState,
    hamiltonian: HermitianOperator,
    max_order: usize,
    derivatives: Vec<HermitianOperator>,
    pub(crate) h_powers: Vec<CMatrix>,
}

impl DerivativeSet {
    pub fn build(xi: &SqrtState, h: &HermitianOperator, max_order: usize) -> Result<Self> {
        if xi.dim() != h.dim() {
            return Err(Error::DimMismatch {
                left: xi.dim(),
                right: h.dim(),
            });
        }
        if max_order > ORDER_CAP {
            return Err(Error::OrderTooLarge {
                order: max_order,
                cap: ORDER_CAP,
            });
        }
        let h_powers = power_table(h.matrix(), max_order);
        let derivatives = (0..=max_order)
            .map(|n| derivative_from_powers(&h_powers, xi.matrix(), n))
            .collect();
        Ok(Self {
            xi: xi.clone(),
            hamiltonian: h.clone(),
            max_order,
            derivatives,
            h_powers,
        })
    }

    pub fn xi(&self) -> &SqrtState {
        &self.xi
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.hamiltonian
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn derivative(&self, n: usize) -> Result<&HermitianOperator> {
        self.derivatives.get(n).ok_or(Error::OrderTooLarge {
            order: n,
            cap: self.max_order,
        })
    }

    /// tr(ξ⁽ᵐ⁾ξ⁽ⁿ⁾).
    pub fn inner(&self, m: usize, n: usize) -> Result<f64> {
        let a = self.derivative(m)?;
        let b = self.derivative(n)?;
        Ok(re_trace_product(a.matrix(), b.matrix()))
    }
}

/// Max elementwise deviation between the closed-form ξ⁽ⁿ⁾ and an O(h²)
/// central-difference stencil built from [`evolve`] samples.
pub fn finite_difference_check(
    xi0: &SqrtState,
    h: &HermitianOperator,
    n: usize,
    step: f64,
) -> Result<f64> {
    if !(1..=4).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "finite differences support orders 1..=4, got {n}"
        )));
    }
    if !(1e-4..=1e-1).contains(&step) {
        return Err(Error::InvalidInput(format!(
            "step {step} outside [1e-4, 1e-1]"
        )));
    }
    let closed = state_derivative(xi0, h, n)?;
    let at = |t: f64| -> Result<CMatrix> { Ok(evolve(xi0, h, t)?.matrix().clone()) };
    // Central stencils, all accurate to O(h^2).
    let fd: CMatrix = match n {
        1 => (at(step)? - at(-step)?) / Complex64::new(2.0 * step, 0.0),
        2 => {
            (at(step)? - at(0.0)? * Complex64::new(2.0, 0.0) + at(-step)?)
                / Complex64::new(step * step, 0.0)
        }
        3 => {
            (at(2.0 * step)? - at(step)? * Complex64::new(2.0, 0.0)
                + at(-step)? * Complex64::new(2.0, 0.0)
                - at(-2.0 * step)?)
                / Complex64::new(2.0 * step.powi(3), 0.0)
        }
        _ => {
            (at(2.0 * step)? - at(step)? * Complex64::new(4.0, 0.0)
                + at(0.0)? * Complex64::new(6.0, 0.0)
                - at(-step)? * Complex64::new(4.0, 0.0)
                + at(-2.0 * step)?)
                / Complex64::new(step.powi(4), 0.0)
        }
    };
    Ok(max_abs(&(closed.matrix() - hermitian_part(&fd))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{principal_sqrt, DensityMatrix};
    use crate::sample::{ginibre_state, gue_hamiltonian, SplitMix64};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_xi(entries: &[f64]) -> SqrtState {
        let d = entries.len();
        let rho = DensityMatrix::from_matrix(CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                c(entries[i] * entries[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        }))
        .unwrap();
        principal_sqrt(&rho).unwrap()
    }

    fn pauli_x() -> HermitianOperator {
        HermitianOperator::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap()
    }

    fn random_instance(dim: usize, rank: usize, seed: u64) -> (SqrtState, HermitianOperator) {
        let mut rng = SplitMix64::new(seed);
        let rho = ginibre_state(dim, rank, &mut rng).unwrap();
        let h = gue_hamiltonian(dim, &mut rng);
        (principal_sqrt(&rho).unwrap(), h)
    }

    #[test]
    fn binomials_are_exact() {
        assert_eq!(binomial(0, 0), 1.0);
        assert_eq!(binomial(6, 3), 20.0);
        assert_eq!(binomial(16, 8), 12870.0);
        assert_eq!(binomial(5, 9), 0.0);
    }

    #[test]
    fn zeroth_derivative_is_xi() {
        let xi = diag_xi(&[0.8, 0.6]);
        let d0 = state_derivative(&xi, &pauli_x(), 0).unwrap();
        assert!(max_abs(&(d0.matrix() - xi.matrix())) < 1e-15);
    }

    #[test]
    fn commuting_pair_has_zero_derivatives() {
        // Exactly diagonal xi and H: the curve is stationary.
        let xi = SqrtState::new(HermitianOperator::from_real(&[0.8, 0.0, 0.0, 0.6], 2).unwrap())
            .unwrap();
        let h = HermitianOperator::from_real(&[1.0, 0.0, 0.0, -2.0], 2).unwrap();
        for n in 1..=6 {
            let dn = state_derivative(&xi, &h, n).unwrap();
            assert!(max_abs(dn.matrix()) <= 1e-13 * 3.0_f64.powi(n as i32), "order {n}");
        }
    }

    #[test]
    fn first_derivative_qubit_example() {
        // -i(sigma_x xi - xi sigma_x) for xi = diag(0.8, 0.6); direct 2x2
        // commutator arithmetic gives [[0, 0.2i], [-0.2i, 0]].
        let xi = diag_xi(&[0.8, 0.6]);
        let d1 = state_derivative(&xi, &pauli_x(), 1).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.2), c(0.0, -0.2), c(0.0, 0.0)]);
        assert!(max_abs(&(d1.matrix() - expected)) < 1e-15);
    }

    #[test]
    fn second_derivative_matches_explicit_form() {
        let (xi, h) = random_instance(3, 2, 17);
        let d2 = state_derivative(&xi, &h, 2).unwrap();
        let hm = h.matrix();
        let xm = xi.matrix();
        let explicit = -(hm * hm * xm) + hm * xm * hm * Complex64::new(2.0, 0.0) - xm * hm * hm;
        assert!(max_abs(&(d2.matrix() - explicit)) < 1e-12);
    }

    #[test]
    fn derivatives_are_hermitian() {
        let (xi, h) = random_instance(4, 3, 23);
        let scale = 1.0 + h.spectral_norm();
        let dset = DerivativeSet::build(&xi, &h, 13).unwrap();
        for n in 0..=13 {
            let d = dset.derivative(n).unwrap();
            let dev = max_abs(&(d.matrix() - d.matrix().adjoint()));
            assert!(dev <= 1e-10 * scale.powi(n as i32), "order {n}: {dev}");
        }
    }

    #[test]
    fn first_derivative_is_commutator() {
        let (xi, h) = random_instance(4, 4, 29);
        let scale = 1.0 + h.spectral_norm();
        let dset = DerivativeSet::build(&xi, &h, 1).unwrap();
        let comm = h.matrix() * xi.matrix() - xi.matrix() * h.matrix();
        let expected = comm.map(|z| z * Complex64::new(0.0, -1.0));
        let dev = max_abs(&(dset.derivative(1).unwrap().matrix() - expected));
        assert!(dev <= 1e-12 * scale);
    }

    #[test]
    fn inner_product_base_cases() {
        let (xi, h) = random_instance(3, 3, 31);
        let dset = DerivativeSet::build(&xi, &h, 5).unwrap();
        assert!((dset.inner(0, 0).unwrap() - 1.0).abs() < 1e-12);
        assert!(dset.inner(0, 1).unwrap().abs() < 1e-12);
    }

    #[test]
    fn odd_order_sums_vanish() {
        let (xi, h) = random_instance(5, 3, 37);
        let scale = 1.0 + h.spectral_norm();
        let dset = DerivativeSet::build(&xi, &h, 13).unwrap();
        for m in 0..=13usize {
            for n in 0..=13usize {
                if (m + n) % 2 == 1 {
                    let v = dset.inner(m, n).unwrap();
                    let tol = 1e-10 * scale.powi((m + n) as i32);
                    assert!(v.abs() <= tol, "({m},{n}): {v} vs {tol}");
                }
            }
        }
    }

    #[test]
    fn inner_product_depends_only_on_order_sum_in_magnitude() {
        let (xi, h) = random_instance(4, 2, 41);
        let scale = 1.0 + h.spectral_norm();
        let dset = DerivativeSet::build(&xi, &h, 12).unwrap();
        for sum in (2..=12usize).step_by(2) {
            let tol = 1e-9 * scale.powi(sum as i32);
            let reference = dset.inner(sum / 2, sum - sum / 2).unwrap().abs();
            for m in 0..=sum {
                let v = dset.inner(m, sum - m).unwrap().abs();
                assert!((v - reference).abs() <= tol, "sum {sum}, split {m}");
            }
        }
    }

    #[test]
    fn time_shift_consistency() {
        // Derivatives at xi_t equal the conjugated derivatives at xi_0.
        let (xi, h) = random_instance(4, 3, 43);
        let scale = 1.0 + h.spectral_norm();
        let t = 0.4;
        let xi_t = evolve(&xi, &h, t).unwrap();
        for n in 0..=5 {
            let at_t = state_derivative(&xi_t, &h, n).unwrap();
            let at_0 = state_derivative(&xi, &h, n).unwrap();
            // evolve() insists on unit norm, so conjugate manually.
            let (vals, vecs) = h.eigh();
            let d = h.dim();
            let phases = CMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    Complex64::from_polar(1.0, -vals[i] * t)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            let u = &vecs * phases * vecs.adjoint();
            let conj = &u * at_0.matrix() * u.adjoint();
            let dev = max_abs(&(at_t.matrix() - conj));
            assert!(dev <= 1e-9 * scale.powi(n as i32), "order {n}: {dev}");
        }
    }

    #[test]
    fn finite_difference_scaling_order_one() {
        let (xi, h) = random_instance(3, 3, 11);
        let d1 = finite_difference_check(&xi, &h, 1, 1e-3).unwrap();
        let d2 = finite_difference_check(&xi, &h, 1, 5e-4).unwrap();
        let ratio = d1 / d2;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn finite_difference_scaling_order_two() {
        let (xi, h) = random_instance(3, 2, 13);
        let d1 = finite_difference_check(&xi, &h, 2, 2e-3).unwrap();
        let d2 = finite_difference_check(&xi, &h, 2, 1e-3).unwrap();
        let ratio = d1 / d2;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn finite_difference_commuting_is_exact() {
        let xi = diag_xi(&[0.8, 0.6]);
        let h = HermitianOperator::from_real(&[1.0, 0.0, 0.0, -1.0], 2).unwrap();
        let dev = finite_difference_check(&xi, &h, 1, 1e-3).unwrap();
        assert!(dev < 1e-13);
    }

    #[test]
    fn order_cap_enforced() {
        let (xi, h) = random_instance(2, 2, 7);
        assert!(matches!(
            state_derivative(&xi, &h, ORDER_CAP + 1),
            Err(Error::OrderTooLarge { .. })
        ));
        assert!(matches!(
            finite_difference_check(&xi, &h, 5, 1e-3),
            Err(Error::InvalidInput(_))
        ));
    }
}
