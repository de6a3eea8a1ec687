#![allow(dead_code)]

use weylkit::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use weylkit::linalg::{c64, CMat};
use weylkit::{DifferenceKernel, GbdtParams, GbdtSystem};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_cmat(rng: &mut ChaCha8Rng, r: usize, c: usize, scale: f64) -> CMat {
    CMat::from_fn(r, c, |_, _| c64(scale * normal(rng), scale * normal(rng)))
}

/// Random parameters satisfying the departure identity by construction.
pub fn random_params(rng: &mut ChaCha8Rng, n: usize, p: usize, negative: bool) -> GbdtParams {
    let a = random_cmat(rng, n, n, 0.5);
    let l1 = random_cmat(rng, n, p, 0.5);
    let l2 = random_cmat(rng, n, p, 0.5);
    let d: Vec<f64> = (0..p)
        .map(|_| {
            let mag = 0.5 + 1.5 * rng.random::<f64>();
            if negative || rng.random::<bool>() {
                -mag
            } else {
                mag
            }
        })
        .collect();
    GbdtParams::from_hermitian_part(&a, l1, l2, d).unwrap()
}

/// A random system with `D < 0` whose `Σ` stays well conditioned on `[0, l]`,
/// so that the closed form keeps full accuracy there.
pub fn well_conditioned_system(rng: &mut ChaCha8Rng, n: usize, p: usize, l: f64) -> GbdtSystem {
    loop {
        let sys = GbdtSystem::new(random_params(rng, n, p, true)).unwrap();
        if let Ok(st) = sys.state(l) {
            if weylkit::linalg::norm2(&st.sigma) < 1e10 {
                return sys;
            }
        }
    }
}

pub fn upper_half_grid(n: usize) -> Vec<Complex64> {
    let mut zs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            zs.push(c64(-3.0 + 6.0 * a as f64 / (n - 1) as f64, 0.2 + 3.0 * b as f64 / (n - 1) as f64));
        }
    }
    zs
}

/// `scale · M e^{−x²}` with a fixed Hermitian 2×2 `M`, so `k(−x) = k(x)*`.
pub fn gaussian_k(x: f64, scale: f64) -> CMat {
    let g = (-x * x).exp() * scale;
    CMat::from_row_slice(2, 2, &[c64(0.4, 0.0), c64(0.1, 0.2), c64(0.1, -0.2), c64(-0.3, 0.0)]) * c64(g, 0.0)
}

/// Midpoint samples of [`gaussian_k`].
pub fn gaussian_kernel(h: f64, len: usize, scale: f64) -> DifferenceKernel {
    DifferenceKernel::from_fn(2, h, len, |x| gaussian_k(x, scale))
}
