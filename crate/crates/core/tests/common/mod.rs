#![allow(dead_code)]

use skewbound::{
    child_seed, ginibre_state, gue_hamiltonian, principal_sqrt, DensityMatrix, HermitianOperator,
    SplitMix64, SqrtState,
};

pub struct Instance {
    pub rho: DensityMatrix,
    pub h: HermitianOperator,
    pub xi: SqrtState,
    pub scale: f64,
    pub seed: u64,
}

pub fn instance(dim: usize, rank: usize, seed: u64) -> Instance {
    let mut rng = SplitMix64::new(seed);
    let rho = ginibre_state(dim, rank, &mut rng).unwrap();
    let h = gue_hamiltonian(dim, &mut rng);
    let xi = principal_sqrt(&rho).unwrap();
    let scale = 1.0 + h.spectral_norm();
    Instance {
        rho,
        h,
        xi,
        scale,
        seed,
    }
}

/// The standard battery set: `count` instances cycling dims 3..=6 and
/// ranks 1..=dim, seeded from one master seed.
pub fn battery(master: u64, count: u64) -> impl Iterator<Item = Instance> {
    (0..count).map(move |i| {
        let dim = 3 + (i % 4) as usize;
        let rank = 1 + (i as usize % dim);
        instance(dim, rank, child_seed(master, i))
    })
}

/// |a − b| against a relative tolerance with an order-homogeneous floor:
/// quantities of homogeneity degree g live on the scale `scaleᵍ`, so
/// anything below tol·scaleᵍ is zero at working precision.
pub fn close(a: f64, b: f64, tol: f64, floor: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(floor)
}
