//! The `verify` subcommand: the cross-module property battery on seeded
//! random instances.
//!
//! Every trial draws one instance (Ginibre state, GUE Hamiltonian) from a
//! child seed of the master seed and runs, at the stated tolerances:
//!
//! - closed-form vs derivative-oracle skew moments, all splits, orders
//!   2..=12 (rel 1e-9),
//! - odd-order inner products vanish, m + n ≤ 6 (1e-10·scaleᵖ),
//! - determinant-ratio norms vs brute-force Gram-Schmidt, n = 1, 3, 5
//!   (rel 1e-8),
//! - the T-independence pairing identity, m = 0..=5 (rel 1e-9),
//! - the closed third-order bound vs the ladder at n = 3 (rel 1e-10),
//! - Parseval over a completed frame vs the second-kind skew information
//!   (rel 1e-10),
//! - shift/scale/unitary/time invariance of moments and bound (rel 1e-8),
//! - full-depth ladder emits only finite values.
//!
//! Trials are evaluated in trial-index order; child seeds are independent,
//! so the aggregate is scheduling-independent by construction.

use skewbound::{
    build_frame, child_seed, complete_frame, evolve, frame_norm, ginibre_state, gue_hamiltonian,
    pairing_identity_check, parseval_decomposition, principal_sqrt, random_unitary,
    skew_info_second_kind, skew_moment_closed_form, skew_moment_oracle, third_order_bound,
    uncertainty_bound, CMatrix, Complex64, DerivativeSet, Error, HermitianOperator,
    RealVectorization, SkewMomentTable, SplitMix64, SqrtState, SATURATION_TOL,
};

pub struct CheckStats {
    pub name: &'static str,
    pub checks: usize,
    pub worst: f64,
    pub failures: Vec<String>,
}

impl CheckStats {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            worst: 0.0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ratio: f64, context: impl FnOnce() -> String) {
        self.checks += 1;
        self.worst = self.worst.max(ratio);
        if ratio > 1.0 || ratio.is_nan() {
            self.failures.push(context());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub struct VerifyOutcome {
    pub stats: Vec<CheckStats>,
    pub trials: usize,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.stats.iter().all(CheckStats::passed)
    }
}

/// Deviation normalized by its tolerance: values ≤ 1 pass.
fn ratio(a: f64, b: f64, tol: f64, floor: f64) -> f64 {
    (a - b).abs() / (tol * a.abs().max(b.abs()).max(floor))
}

pub fn run(dims: &[usize], trials: usize, master_seed: u64, depth: usize) -> VerifyOutcome {
    let mut moment_eq = CheckStats::new("moment-equivalence");
    let mut odd_sum = CheckStats::new("odd-sum-vanishing");
    let mut norms = CheckStats::new("norm-cross-check");
    let mut pairing = CheckStats::new("pairing-identity");
    let mut third = CheckStats::new("third-order-vs-ladder");
    let mut parseval = CheckStats::new("parseval");
    let mut invariance = CheckStats::new("invariance");
    let mut finiteness = CheckStats::new("ladder-finiteness");

    let mut trial_index = 0u64;
    for &dim in dims {
        for t in 0..trials {
            let seed = child_seed(master_seed, trial_index);
            trial_index += 1;
            let mut rng = SplitMix64::new(seed);
            let rank = 1 + (t % dim);
            let rho = ginibre_state(dim, rank, &mut rng).expect("Ginibre state is valid");
            let h = gue_hamiltonian(dim, &mut rng);
            let xi = principal_sqrt(&rho).expect("principal root exists");
            let scale = 1.0 + h.spectral_norm();
            let fail = |what: &str| format!("{what} (dim {dim}, seed {seed})");

            let dset = DerivativeSet::build(&xi, &h, 13).expect("order 13 derivatives");
            let table_order = 12.max(2 * depth);
            let table = SkewMomentTable::build(&h, &xi, table_order).expect("moment table");

            // moment equivalence, all splits
            for order in (2..=12usize).step_by(2) {
                let closed = skew_moment_closed_form(&h, &xi, order).unwrap();
                let floor = scale.powi(order as i32);
                for n in 0..=order {
                    let oracle = skew_moment_oracle(&dset, n, order - n).unwrap();
                    moment_eq.record(ratio(closed, oracle, 1e-9, floor), || {
                        fail(&format!("order {order} split ({n},{})", order - n))
                    });
                }
            }

            // odd-sum vanishing
            for m in 0..=6usize {
                for nn in 0..=(6 - m) {
                    let v = dset.inner(2 * m, 2 * nn + 1).unwrap();
                    let tol = 1e-10 * scale.powi((2 * m + 2 * nn + 1) as i32);
                    odd_sum.record(v.abs() / tol, || {
                        fail(&format!("tr(xi^({})xi^({}))", 2 * m, 2 * nn + 1))
                    });
                }
            }

            // norm cross-check: ratios against brute-force norms, and each
            // Hankel determinant against the product of Gram-Schmidt norms
            // (D_2n = prod of the first (n+1)/2 odd norms).
            let frame = build_frame(&dset, 5, true, SATURATION_TOL).unwrap();
            let mut norm_product = 1.0;
            for n in [1usize, 3, 5] {
                let formula = match frame_norm(&table, n) {
                    Ok(v) => v,
                    Err(Error::RankSaturated { .. }) => continue,
                    Err(e) => {
                        norms.record(f64::INFINITY, || fail(&format!("frame_norm({n}): {e}")));
                        continue;
                    }
                };
                if let Some(pos) = frame.position_of_order(n) {
                    let brute = frame.norms[pos];
                    norms.record(ratio(formula, brute, 1e-8, 0.0), || {
                        fail(&format!("norm n={n}"))
                    });
                    norm_product *= brute;
                    let det = skewbound::hankel_determinant(&table, n).unwrap();
                    norms.record(ratio(det, norm_product, 1e-8, 0.0), || {
                        fail(&format!("determinant vs norm product, n={n}"))
                    });
                }
            }

            // pairing identity
            for m in 0..=5usize {
                let (lhs, rhs) = pairing_identity_check(&dset, m).unwrap();
                let floor = scale.powi((2 * m + 1) as i32);
                pairing.record(ratio(lhs, rhs, 1e-9, floor), || {
                    fail(&format!("pairing m={m}"))
                });
            }

            // third-order closed form vs ladder
            match third_order_bound(&table) {
                Ok(closed) => {
                    let ladder = uncertainty_bound(&table, 3).unwrap();
                    third.record(ratio(ladder.bound(), closed, 1e-10, 0.0), || {
                        fail("third-order bound")
                    });
                }
                Err(Error::RankSaturated { .. }) | Err(Error::ZeroFisherInformation { .. }) => {}
                Err(e) => third.record(f64::INFINITY, || fail(&format!("third-order: {e}"))),
            }

            // Parseval over a completed frame
            let t_est = gue_hamiltonian(dim, &mut rng);
            let vec = RealVectorization::new(dim);
            let full_src = build_frame(&dset, 2 * dim.min(6), false, SATURATION_TOL).unwrap();
            match complete_frame(&full_src, &vec) {
                Ok(full) => match parseval_decomposition(&t_est, &xi, &full) {
                    Ok(terms) => {
                        let total: f64 = terms.iter().sum();
                        let skew2 = skew_info_second_kind(&t_est, &rho).unwrap();
                        parseval.record(ratio(total, skew2, 1e-10, 0.0), || fail("parseval sum"));
                        if let Some(pos0) = full.position_of_order(0) {
                            let t_scale2 = (1.0 + t_est.spectral_norm()).powi(2);
                            parseval.record(terms[pos0].abs() / (1e-12 * t_scale2), || {
                                fail("parseval n=0 term")
                            });
                        }
                    }
                    Err(e) => parseval.record(f64::INFINITY, || fail(&format!("parseval: {e}"))),
                },
                Err(e) => parseval.record(f64::INFINITY, || fail(&format!("completion: {e}"))),
            }

            // invariances
            let shift = (2.0 * rng.next_f64() - 1.0) * h.spectral_norm();
            let lambda = 0.5 + 2.0 * rng.next_f64();
            let tval = 2.0 * rng.next_f64() - 1.0;
            let u = random_unitary(dim, &mut rng);
            let h_shift = HermitianOperator::new(
                h.matrix() + CMatrix::identity(dim, dim) * Complex64::new(shift, 0.0),
            )
            .expect("shifted H is Hermitian");
            let h_scale = HermitianOperator::new(h.matrix() * Complex64::new(lambda, 0.0))
                .expect("scaled H is Hermitian");
            let h_u = HermitianOperator::new(&u * h.matrix() * u.adjoint())
                .expect("conjugated H is Hermitian");
            let xi_u = SqrtState::new(
                HermitianOperator::new(&u * xi.matrix() * u.adjoint())
                    .expect("conjugated root is Hermitian"),
            )
            .expect("conjugated root stays normalized");
            let xi_t = evolve(&xi, &h, tval).expect("evolution");
            let t_shift = SkewMomentTable::build(&h_shift, &xi, table_order).unwrap();
            let t_scale = SkewMomentTable::build(&h_scale, &xi, table_order).unwrap();
            let t_u = SkewMomentTable::build(&h_u, &xi_u, table_order).unwrap();
            let t_time = SkewMomentTable::build(&h, &xi_t, table_order).unwrap();
            for order in table.orders() {
                let base = table.moment(order).unwrap();
                let floor = scale.powi(order as i32);
                for (name, value) in [
                    ("shift", t_shift.moment(order).unwrap()),
                    ("unitary", t_u.moment(order).unwrap()),
                    ("time", t_time.moment(order).unwrap()),
                ] {
                    invariance.record(ratio(base, value, 1e-8, floor), || {
                        fail(&format!("{name} invariance, order {order}"))
                    });
                }
                let expected = base * lambda.powi(order as i32);
                let got = t_scale.moment(order).unwrap();
                invariance.record(
                    ratio(expected, got, 1e-8, (lambda * scale).powi(order as i32)),
                    || fail(&format!("scaling covariance, order {order}")),
                );
            }
            if let (Ok(b0), Ok(b1)) = (
                uncertainty_bound(&table, 3),
                uncertainty_bound(&t_scale, 3),
            ) {
                if b0.truncation_order == b1.truncation_order && b0.truncation_order > 0 {
                    invariance.record(
                        ratio(b0.bound() / (lambda * lambda), b1.bound(), 1e-8, 0.0),
                        || fail("bound scaling"),
                    );
                }
            }

            // full-depth ladder stays finite
            match uncertainty_bound(&table, depth) {
                Ok(ladder) => {
                    let all_finite = ladder.rows.iter().all(|r| {
                        r.determinant.is_finite()
                            && r.norm.is_finite()
                            && r.numerator.is_finite()
                            && r.term.is_finite()
                            && r.cumulative.is_finite()
                    });
                    finiteness.record(if all_finite { 0.0 } else { f64::INFINITY }, || {
                        fail("non-finite ladder value")
                    });
                }
                Err(Error::ZeroFisherInformation { .. }) => {}
                Err(e) => finiteness.record(f64::INFINITY, || fail(&format!("ladder: {e}"))),
            }
        }
    }

    VerifyOutcome {
        stats: vec![
            moment_eq, odd_sum, norms, pairing, third, parseval, invariance, finiteness,
        ],
        trials: trial_index as usize,
    }
}
