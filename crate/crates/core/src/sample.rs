//! Seeded random instances: Ginibre density matrices and GUE Hamiltonians.
//!
//! The generator is pinned so that a seed reproduces the same instance on
//! any platform or implementation:
//!
//! - Raw 64-bit stream: SplitMix64 (Steele, Lea & Flood's constants).
//! - Uniforms: the top 53 bits mapped to (0, 1] via `((x >> 11) + 1) · 2⁻⁵³`.
//! - Normals: Box-Muller; each pair of uniforms (u₁, u₂) yields
//!   `√(−2 ln u₁)·cos(2πu₂)` then `√(−2 ln u₁)·sin(2πu₂)`.
//! - Complex Gaussian entries are drawn row-major, real part before
//!   imaginary part.
//! - Child seed for trial k of a master seed s: `mix64(s + (k+1)·GAMMA)`
//!   where `mix64` is the SplitMix64 output function and GAMMA its
//!   increment constant.

use crate::error::Result;
use crate::linalg::{CMatrix, Complex64, DensityMatrix, HermitianOperator};

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 stream with a Box-Muller normal cache.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    pending_normal: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            pending_normal: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in (0, 1], 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.pending_normal.take() {
            return z;
        }
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.pending_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    fn next_complex_normal(&mut self) -> Complex64 {
        let re = self.next_normal();
        let im = self.next_normal();
        Complex64::new(re, im)
    }
}

/// Independent child seed for trial `index` of a master seed.
pub fn child_seed(master: u64, index: u64) -> u64 {
    mix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Complex Gaussian matrix with standard-normal real and imaginary parts,
/// entries drawn row-major.
fn complex_gaussian(rows: usize, cols: usize, rng: &mut SplitMix64) -> CMatrix {
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        entries.push(rng.next_complex_normal());
    }
    CMatrix::from_fn(rows, cols, |i, j| entries[i * cols + j])
}

/// GUE-style Hamiltonian H = (A + A†)/2 from a standard complex Gaussian A.
pub fn gue_hamiltonian(dim: usize, rng: &mut SplitMix64) -> HermitianOperator {
    let a = complex_gaussian(dim, dim, rng);
    HermitianOperator::wrap((&a + a.adjoint()) * Complex64::new(0.5, 0.0))
}

/// Rank-r Ginibre state ρ = GG†/tr(GG†) from a d×r standard complex
/// Gaussian G. Rank 1 yields a pure state.
pub fn ginibre_state(dim: usize, rank: usize, rng: &mut SplitMix64) -> Result<DensityMatrix> {
    let g = complex_gaussian(dim, rank, rng);
    let w = &g * g.adjoint();
    let tr: f64 = (0..dim).map(|i| w[(i, i)].re).sum();
    DensityMatrix::from_matrix(w / Complex64::new(tr, 0.0))
}

/// Haar-like random unitary: the eigenvector matrix of a GUE sample.
/// Good enough for covariance tests; not a calibrated Haar measure.
pub fn random_unitary(dim: usize, rng: &mut SplitMix64) -> CMatrix {
    let h = gue_hamiltonian(dim, rng);
    let (_, vecs) = h.eigh();
    vecs
}
