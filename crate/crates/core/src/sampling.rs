//! Seeded random inputs for the property suites and simulations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraElement, Dim};
use crate::hopf::BundlePoint;

/// ASCII "H0PF".
pub const DEFAULT_SEED: u64 = 0x4830_5046;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn gaussian_element<R: Rng>(rng: &mut R, dim: Dim) -> AlgebraElement {
    AlgebraElement::from_coeffs(dim, &gaussian_vec(rng, dim.n())).expect("length matches")
}

/// Uniform on the unit sphere `S^{n-1}`.
pub fn unit_element<R: Rng>(rng: &mut R, dim: Dim) -> AlgebraElement {
    loop {
        let x = gaussian_element(rng, dim);
        let norm = x.norm();
        if norm > 1e-6 {
            return x.scale(1.0 / norm);
        }
    }
}

pub fn gaussian_bundle_point<R: Rng>(rng: &mut R, dim: Dim) -> BundlePoint {
    BundlePoint::new(gaussian_element(rng, dim), gaussian_element(rng, dim)).expect("same dim")
}

/// Random antisymmetric `k × k` matrix with standard normal entries above
/// the diagonal.
pub fn antisymmetric<R: Rng>(rng: &mut R, k: usize) -> nalgebra::DMatrix<f64> {
    let mut m = nalgebra::DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i + 1..k {
            let v: f64 = rng.sample(StandardNormal);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}
