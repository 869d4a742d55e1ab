//! Seeded random instance generation.
//!
//! The generator is deliberately small and fully documented so that any other
//! implementation can reproduce identical streams:
//!
//! * `SplitMix64`: the state advances by the Weyl constant
//!   `0x9E3779B97F4A7C15` per draw and the output is the finalizer
//!   `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
//!   z *= 0x94D049BB133111EB; z ^= z >> 31`.
//! * Uniform doubles take the top 53 bits: `(x >> 11) · 2⁻⁵³ ∈ [0, 1)`.
//! * Standard normals come from Box-Muller on two uniforms
//!   (`sqrt(-2 ln(1-u₁))` with the cosine branch first, sine cached).
//! * A random symmetric matrix draws a full m×m square of normals row-major
//!   and symmetrizes; a random positive definite matrix is
//!   `exp(spread · S)`.
//! * Dirichlet(1) weights normalize `-ln(1-uᵢ)` exponential draws.

use crate::error::Result;
use crate::linalg::{Matrix, SymMatrix};
use crate::measure::DiscreteMeasure;
use crate::spd::{mat_exp, SpdMatrix};

/// SplitMix64 counter-based generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
    cached_normal: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 {
            state: seed,
            cached_normal: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.cached_normal.take() {
            return z;
        }
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.cached_normal = Some(r * angle.sin());
        r * angle.cos()
    }
}

/// Symmetric matrix with i.i.d. standard normal entries, symmetrized.
pub fn random_sym(dim: usize, rng: &mut SplitMix64) -> SymMatrix {
    let m = Matrix::from_fn(dim, |_, _| rng.next_normal());
    SymMatrix::new(m)
}

/// Positive definite matrix exp(spread · S) with S a random symmetric matrix.
pub fn random_spd(dim: usize, spread: f64, rng: &mut SplitMix64) -> Result<SpdMatrix> {
    let s = random_sym(dim, rng);
    mat_exp(&s.scaled(spread))
}

/// Weight model for random measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    Uniform,
    Dirichlet,
}

/// Finitely supported random measure with `support` atoms exp(spread · Sⱼ).
pub fn random_measure(
    dim: usize,
    support: usize,
    spread: f64,
    mode: WeightMode,
    rng: &mut SplitMix64,
) -> Result<DiscreteMeasure> {
    let mut atoms = Vec::with_capacity(support);
    for _ in 0..support {
        atoms.push(random_spd(dim, spread, rng)?);
    }
    let weights = match mode {
        WeightMode::Uniform => vec![1.0 / support as f64; support],
        WeightMode::Dirichlet => {
            let draws: Vec<f64> = (0..support)
                .map(|_| -(1.0 - rng.next_f64()).ln())
                .collect();
            let total: f64 = draws.iter().sum();
            draws.iter().map(|e| e / total).collect()
        }
    };
    DiscreteMeasure::new(atoms, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_stream() {
        // first three outputs for seed 0, cross-checked against the
        // published SplitMix64 reference sequence
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn uniform_is_in_unit_interval() {
        let mut rng = SplitMix64::new(42);
        for _ in 0..1000 {
            let u = rng.next_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = SplitMix64::new(9);
        let mut b = SplitMix64::new(9);
        for _ in 0..32 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn random_measure_is_valid() {
        let mut rng = SplitMix64::new(3);
        let mu = random_measure(3, 5, 0.7, WeightMode::Dirichlet, &mut rng).unwrap();
        assert_eq!(mu.len(), 5);
        let total: f64 = mu.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tiny_spread_concentrates_at_identity() {
        let mut rng = SplitMix64::new(4);
        let a = random_spd(3, 1e-8, &mut rng).unwrap();
        let gap = (a.matrix() - SpdMatrix::identity(3).matrix()).frobenius_norm();
        assert!(gap < 1e-6);
    }
}
