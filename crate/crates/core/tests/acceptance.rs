//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the worst observed deviation. Run with `--nocapture` to see them.

mod common;

use std::time::Instant;

use common::{battery, close, instance};
use skewbound::{
    build_frame, central_moment, child_seed, estimation_angle, frame_norm, gue_hamiltonian, hankel_determinant, pairing_identity_check, parseval_decomposition,
    principal_sqrt, skew_info_second_kind, skew_moment_closed_form, skew_moment_oracle,
    third_order_bound, third_order_central_bound, uncertainty_bound, wy_skew_information,
    complete_frame, grad_norm_sq, evolve, random_unitary, DerivativeSet, Error, HermitianOperator,
    RealVectorization, SkewMomentTable, SplitMix64, SqrtState, SATURATION_TOL,
};

/// Criterion 1: closed-form skew moments agree with the derivative-route
/// oracle at every split (n, m), orders 2..=12, over 100 seeded instances
/// of dims 3..=6 and ranks 1..=dim, at relative tolerance 1e-9; and the
/// whole run stays under 30 seconds.
#[test]
fn criterion_1_lemma_equivalence() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for inst in battery(0xA11CE, 100) {
        let dset = DerivativeSet::build(&inst.xi, &inst.h, 12).unwrap();
        for order in (2..=12usize).step_by(2) {
            let closed = skew_moment_closed_form(&inst.h, &inst.xi, order).unwrap();
            let floor = inst.scale.powi(order as i32);
            for n in 0..=order {
                let oracle = skew_moment_oracle(&dset, n, order - n).unwrap();
                let dev = (closed - oracle).abs() / closed.abs().max(oracle.abs()).max(floor);
                worst = worst.max(dev);
                assert!(
                    close(closed, oracle, 1e-9, floor),
                    "seed {} order {order} split ({n},{}): closed {closed} oracle {oracle}",
                    inst.seed,
                    order - n
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "runtime {elapsed:?}");
    println!(
        "criterion 1: PASS — lemma/oracle equivalence on 100 instances, worst rel dev {worst:.3e}, runtime {elapsed:.2?}"
    );
}

/// Criterion 2: tr(ξ^(2m) ξ^(2n+1)) vanishes for all m + n ≤ 6 within
/// 1e-10 · (1 + ‖H‖₂)^(2m+2n+1) on the same instance set.
#[test]
fn criterion_2_odd_sum_vanishing() {
    let mut worst = 0.0_f64;
    for inst in battery(0xA11CE, 100) {
        let dset = DerivativeSet::build(&inst.xi, &inst.h, 13).unwrap();
        for m in 0..=6usize {
            for n in 0..=(6 - m) {
                let v = dset.inner(2 * m, 2 * n + 1).unwrap();
                let tol = 1e-10 * inst.scale.powi((2 * m + 2 * n + 1) as i32);
                worst = worst.max(v.abs() / tol);
                assert!(
                    v.abs() <= tol,
                    "seed {}: tr(xi^({})xi^({})) = {v}",
                    inst.seed,
                    2 * m,
                    2 * n + 1
                );
            }
        }
    }
    println!(
        "criterion 2: PASS — odd-sum inner products vanish, worst |tr|/tol {worst:.3e}"
    );
}

/// Criterion 3: Hankel-determinant ratios D_2n/D_{2n−4} equal brute-force
/// Gram-Schmidt norms ‖Ψ_n‖² for n = 1, 3, 5 at relative 1e-8 whenever
/// both are above the rank tolerance.
#[test]
fn criterion_3_norm_cross_check() {
    let mut worst = 0.0_f64;
    let mut checked = 0usize;
    for inst in battery(0xA11CE, 100) {
        let dset = DerivativeSet::build(&inst.xi, &inst.h, 5).unwrap();
        let frame = build_frame(&dset, 5, true, SATURATION_TOL).unwrap();
        let table = SkewMomentTable::build(&inst.h, &inst.xi, 10).unwrap();
        for n in [1usize, 3, 5] {
            let ratio = match frame_norm(&table, n) {
                Ok(v) => v,
                Err(Error::RankSaturated { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            let Some(pos) = frame.position_of_order(n) else {
                continue;
            };
            let brute = frame.norms[pos];
            let dev = (ratio - brute).abs() / ratio.abs().max(brute.abs());
            worst = worst.max(dev);
            checked += 1;
            assert!(dev <= 1e-8, "seed {} n={n}: {ratio} vs {brute}", inst.seed);
        }
    }
    assert!(checked > 100, "only {checked} norm pairs compared");
    println!(
        "criterion 3: PASS — {checked} determinant-ratio/Gram-Schmidt norm pairs, worst rel dev {worst:.3e}"
    );
}

/// Criterion 4: the ladder truncated at n = 3 reproduces the closed
/// third-order bound to relative 1e-10 on every non-saturated instance.
#[test]
fn criterion_4_third_order_closed_form() {
    let mut worst = 0.0_f64;
    let mut checked = 0usize;
    for inst in battery(0xA11CE, 100) {
        let table = SkewMomentTable::build(&inst.h, &inst.xi, 6).unwrap();
        let closed = match third_order_bound(&table) {
            Ok(v) => v,
            Err(Error::RankSaturated { .. }) | Err(Error::ZeroFisherInformation { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let ladder = uncertainty_bound(&table, 3).unwrap();
        assert!(!ladder.saturation_flag, "seed {}", inst.seed);
        let dev = (ladder.bound() - closed).abs() / closed.abs();
        worst = worst.max(dev);
        checked += 1;
        assert!(dev <= 1e-10, "seed {}: {} vs {closed}", inst.seed, ladder.bound());
    }
    assert!(checked >= 90, "only {checked} non-saturated instances");
    println!(
        "criterion 4: PASS — ladder K=3 equals the closed form on {checked} instances, worst rel dev {worst:.3e}"
    );
}

/// Criterion 5: the T-free pairing expansion equals
/// (−1)^(m+2) (2m+1) S_2m for m = 0..=5 at relative 1e-9.
#[test]
fn criterion_5_estimator_independence() {
    let mut worst = 0.0_f64;
    for inst in battery(0xA11CE, 100) {
        let dset = DerivativeSet::build(&inst.xi, &inst.h, 11).unwrap();
        for m in 0..=5usize {
            let (lhs, rhs) = pairing_identity_check(&dset, m).unwrap();
            let floor = inst.scale.powi((2 * m + 1) as i32);
            let dev = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(floor);
            worst = worst.max(dev);
            assert!(
                close(lhs, rhs, 1e-9, floor),
                "seed {} m={m}: {lhs} vs {rhs}",
                inst.seed
            );
        }
    }
    println!(
        "criterion 5: PASS — pairing identity m=0..=5 on 100 instances, worst rel dev {worst:.3e}"
    );
}

/// Criterion 6: over a completed orthonormal frame the Parseval sum
/// equals the skew information of the second kind and half the gradient
/// norm (relative 1e-10), and the ξ-direction term vanishes to 1e-12.
#[test]
fn criterion_6_parseval_decomposition() {
    let mut worst = 0.0_f64;
    for inst in battery(0xBEEF, 40) {
        let dim = inst.rho.dim();
        let mut rng = SplitMix64::new(child_seed(inst.seed, 99));
        let t = gue_hamiltonian(dim, &mut rng);
        let vec = RealVectorization::new(dim);
        let dset = DerivativeSet::build(&inst.xi, &inst.h, 2 * dim).unwrap();
        let frame = build_frame(&dset, 2 * dim, false, SATURATION_TOL).unwrap();
        let full = complete_frame(&frame, &vec).unwrap();
        let terms = parseval_decomposition(&t, &inst.xi, &full).unwrap();
        let total: f64 = terms.iter().sum();
        let skew2 = skew_info_second_kind(&t, &inst.rho).unwrap();
        let half_grad = 0.5 * grad_norm_sq(&t, &inst.xi).unwrap();
        let dev = ((total - skew2).abs() / skew2.abs()).max((total - half_grad).abs() / half_grad.abs());
        worst = worst.max(dev);
        assert!(dev <= 1e-10, "seed {}: {total} vs {skew2} / {half_grad}", inst.seed);
        let pos0 = full.position_of_order(0).unwrap();
        let t_scale = (1.0 + t.spectral_norm()).powi(2);
        assert!(terms[pos0].abs() <= 1e-12 * t_scale, "seed {}", inst.seed);
    }
    println!(
        "criterion 6: PASS — Parseval sum matches the second-kind skew information, worst rel dev {worst:.3e}"
    );
}

/// Criterion 7: S₂ = 2 × Wigner-Yanase skew information to 1e-12
/// relative; pure states have δH² = δT² = 0 (1e-10 after scale
/// normalization) and B₁ = 1/(4ΔH²) to 1e-10 relative.
#[test]
fn criterion_7_first_order_reductions() {
    let mut worst_s2 = 0.0_f64;
    for inst in battery(0xA11CE, 100) {
        let table = SkewMomentTable::build(&inst.h, &inst.xi, 2).unwrap();
        let s2 = table.moment(2).unwrap();
        let wy = wy_skew_information(&inst.h, &inst.rho).unwrap();
        let dev = (s2 - 2.0 * wy).abs() / s2.abs().max(inst.scale.powi(2) * 1e-6);
        worst_s2 = worst_s2.max(dev);
        assert!(dev <= 1e-12, "seed {}: S2 {s2} vs 2wy {}", inst.seed, 2.0 * wy);
    }
    // pure states
    for i in 0..25u64 {
        let dim = 3 + (i % 3) as usize;
        let inst = instance(dim, 1, child_seed(0x50DA, i));
        let scale2 = inst.scale * inst.scale;
        let var_h = central_moment(&inst.h, &inst.rho, 2).unwrap();
        let wy = wy_skew_information(&inst.h, &inst.rho).unwrap();
        assert!((var_h - wy).abs() <= 1e-10 * scale2, "deltaH^2 != 0");
        let mut rng = SplitMix64::new(child_seed(inst.seed, 7));
        let t = gue_hamiltonian(dim, &mut rng);
        let skew2 = skew_info_second_kind(&t, &inst.rho).unwrap();
        let var_t = central_moment(&t, &inst.rho, 2).unwrap();
        let t_scale2 = (1.0 + t.spectral_norm()).powi(2);
        assert!((skew2 - var_t).abs() <= 1e-10 * t_scale2, "deltaT^2 != 0");
        let table = SkewMomentTable::build(&inst.h, &inst.xi, 2).unwrap();
        let b1 = uncertainty_bound(&table, 1).unwrap().bound();
        let expected = 1.0 / (4.0 * var_h);
        assert!((b1 - expected).abs() <= 1e-10 * expected, "B1 {b1} vs {expected}");
    }
    println!(
        "criterion 7: PASS — S2 = 2*WY (worst rel dev {worst_s2:.3e}); pure-state reductions hold on 25 instances"
    );
}

/// Criterion 8: every non-commuting qubit instance has S₆S₂ − S₄² = 0
/// within 1e-9·scale¹² and a ladder that truncates at order 1 with the
/// saturation flag set; no NaN/Inf anywhere.
#[test]
fn criterion_8_qubit_collapse() {
    let mut worst = 0.0_f64;
    let mut count = 0usize;
    for i in 0..50u64 {
        let rank = 1 + (i % 2) as usize;
        let inst = instance(2, rank, child_seed(0x0B17, i));
        let table = SkewMomentTable::build(&inst.h, &inst.xi, 8).unwrap();
        let s2 = table.moment(2).unwrap();
        if s2 <= 1e-10 * inst.scale.powi(2) {
            continue; // commuting: nothing to collapse
        }
        count += 1;
        let d6 = hankel_determinant(&table, 3).unwrap();
        let tol = 1e-9 * inst.scale.powi(12);
        worst = worst.max(d6.abs() / tol);
        assert!(d6.abs() <= tol, "seed {}: D6 = {d6}", inst.seed);
        let ladder = uncertainty_bound(&table, 3).unwrap();
        assert_eq!(ladder.truncation_order, 1);
        assert!(ladder.saturation_flag);
        for row in &ladder.rows {
            assert!(row.determinant.is_finite());
            assert!(row.norm.is_finite());
            assert!(row.numerator.is_finite());
            assert!(row.term.is_finite());
            assert!(row.cumulative.is_finite());
        }
    }
    assert!(count >= 45, "only {count} non-commuting qubits");
    println!(
        "criterion 8: PASS — {count} qubit instances collapse at order 1, worst |D6|/tol {worst:.3e}"
    );
}

/// Criterion 9: shift, scale, unitary and time invariance of the moments
/// and the bound, each to relative 1e-8 over 50 seeded trials.
#[test]
fn criterion_9_invariance_battery() {
    let mut worst = 0.0_f64;
    for (k, inst) in battery(0x1417, 50).enumerate() {
        let dim = inst.rho.dim();
        let table = SkewMomentTable::build(&inst.h, &inst.xi, 12).unwrap();
        let mut rng = SplitMix64::new(child_seed(0x1417F, k as u64));

        // shift H -> H + cI
        let c = (2.0 * rng.next_f64() - 1.0) * inst.h.spectral_norm();
        let shifted = HermitianOperator::new(
            inst.h.matrix()
                + skewbound::CMatrix::identity(dim, dim) * skewbound::Complex64::new(c, 0.0),
        )
        .unwrap();
        let t_shift = SkewMomentTable::build(&shifted, &inst.xi, 12).unwrap();

        // scale H -> lambda H
        let lambda = 0.5 + 2.0 * rng.next_f64();
        let scaled = HermitianOperator::new(
            inst.h.matrix() * skewbound::Complex64::new(lambda, 0.0),
        )
        .unwrap();
        let t_scale = SkewMomentTable::build(&scaled, &inst.xi, 12).unwrap();

        // unitary conjugation
        let u = random_unitary(dim, &mut rng);
        let h_u = HermitianOperator::new(&u * inst.h.matrix() * u.adjoint()).unwrap();
        let xi_u = SqrtState::new(HermitianOperator::new(&u * inst.xi.matrix() * u.adjoint()).unwrap()).unwrap();
        let t_unitary = SkewMomentTable::build(&h_u, &xi_u, 12).unwrap();

        // evolution along the curve
        let tval = 2.0 * rng.next_f64() - 1.0;
        let xi_t = evolve(&inst.xi, &inst.h, tval).unwrap();
        let t_time = SkewMomentTable::build(&inst.h, &xi_t, 12).unwrap();

        for order in table.orders() {
            let base = table.moment(order).unwrap();
            let floor = inst.scale.powi(order as i32);
            for (name, other) in [
                ("shift", t_shift.moment(order).unwrap()),
                ("unitary", t_unitary.moment(order).unwrap()),
                ("time", t_time.moment(order).unwrap()),
            ] {
                let dev = (base - other).abs() / base.abs().max(other.abs()).max(floor);
                worst = worst.max(dev);
                assert!(dev <= 1e-8, "trial {k} {name} order {order}: {base} vs {other}");
            }
            let scaled_expected = base * lambda.powi(order as i32);
            let scaled_got = t_scale.moment(order).unwrap();
            let floor_scaled = (lambda * inst.scale).powi(order as i32);
            let dev = (scaled_expected - scaled_got).abs()
                / scaled_expected.abs().max(scaled_got.abs()).max(floor_scaled);
            worst = worst.max(dev);
            assert!(dev <= 1e-8, "trial {k} scaling order {order}");
        }

        // bound scaling: under H -> lambda H the cumulative bound scales by
        // lambda^-2 at any fixed truncation.
        if let (Ok(b0), Ok(b1)) = (uncertainty_bound(&table, 3), uncertainty_bound(&t_scale, 3)) {
            if b0.truncation_order == b1.truncation_order {
                let expected = b0.bound() / (lambda * lambda);
                let dev = (b1.bound() - expected).abs() / expected.abs();
                worst = worst.max(dev);
                assert!(dev <= 1e-8, "trial {k} bound scaling");
            }
        }
    }
    println!(
        "criterion 9: PASS — shift/scale/unitary/time invariance over 50 trials, worst rel dev {worst:.3e}"
    );
}

/// Criterion 10: for pure states in dim ≥ 3 the third-order skew-moment
/// bound differs from the central-moment bound by more than 1e-6 relative
/// — skew moments are not central moments.
#[test]
fn criterion_10_pure_state_non_reduction() {
    let mut count = 0usize;
    let mut min_gap = f64::INFINITY;
    let mut i = 0u64;
    while count < 10 && i < 40 {
        let dim = 3 + (i % 3) as usize;
        let inst = instance(dim, 1, child_seed(0xFACE, i));
        i += 1;
        let table = SkewMomentTable::build(&inst.h, &inst.xi, 6).unwrap();
        let skew = match third_order_bound(&table) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let central = match third_order_central_bound(&inst.h, &inst.rho) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let gap = (skew - central).abs() / central.abs();
        min_gap = min_gap.min(gap);
        assert!(gap > 1e-6, "seed {}: skew {skew} central {central}", inst.seed);
        count += 1;
    }
    assert!(count >= 10, "only {count} pure instances evaluated");
    println!(
        "criterion 10: PASS — {count} pure instances, smallest relative gap {min_gap:.3e}"
    );
}

/// Not a numbered criterion, but the geometry surface is part of the
/// external contract: dual computation of the estimation angle agrees in
/// self-consistent mode, and the arc length is exact for seeded
/// instances.
#[test]
fn geometry_dual_angle_consistency() {
    let mut worst = 0.0_f64;
    for i in 0..20u64 {
        let dim = 3 + (i % 3) as usize;
        let inst = instance(dim, dim, child_seed(0x6E0, i));
        let mut rng = SplitMix64::new(child_seed(inst.seed, 3));
        let t = gue_hamiltonian(dim, &mut rng);
        let report = match estimation_angle(&t, &inst.rho, &inst.h, None, true) {
            Ok(r) => r,
            Err(Error::InvalidGeometry { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        worst = worst.max(report.residual);
        assert!(report.residual <= 1e-8, "seed {}", inst.seed);
    }
    // exercise the near-pure stress case: eigenvalues (1-1e-8, 1e-8)
    let mut rng = SplitMix64::new(0xDE6E);
    let h = gue_hamiltonian(2, &mut rng);
    let rho = {
        let g = skewbound::CMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                skewbound::Complex64::new(if i == 0 { 1.0 - 1e-8 } else { 1e-8 }, 0.0)
            } else {
                skewbound::Complex64::new(0.0, 0.0)
            }
        });
        skewbound::DensityMatrix::from_matrix(g).unwrap()
    };
    let xi = principal_sqrt(&rho).unwrap();
    let table = SkewMomentTable::build(&h, &xi, 8).unwrap();
    match uncertainty_bound(&table, 3) {
        Ok(ladder) => {
            assert!(ladder.bound().is_finite());
            for row in &ladder.rows {
                assert!(row.term.is_finite() && row.cumulative.is_finite());
            }
        }
        Err(Error::ZeroFisherInformation { .. }) | Err(Error::RankSaturated { .. }) => {}
        Err(e) => panic!("near-pure instance: {e}"),
    }
    println!("geometry: PASS — dual angle computation, worst residual {worst:.3e}");
}

/// Pure-state Eq-41-style bound is still produced for a rank-1 Ginibre
/// state with generic H in dim >= 3 (the denominator does not vanish).
#[test]
fn pure_states_reach_third_order_in_dim_three_plus() {
    let mut produced = 0usize;
    for i in 0..10u64 {
        let inst = instance(4, 1, child_seed(0xF00D, i));
        let table = SkewMomentTable::build(&inst.h, &inst.xi, 6).unwrap();
        if third_order_bound(&table).is_ok() {
            produced += 1;
        }
    }
    assert!(produced >= 9, "only {produced}/10 pure dim-4 instances had a third-order row");
    println!("pure-state ladder depth: PASS — {produced}/10 instances");
}
