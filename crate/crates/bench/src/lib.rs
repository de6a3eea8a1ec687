//! Fixed inputs shared by the benchmarks.

use weylkit::linalg::{c64, CMat, I};
use weylkit::{DifferenceKernel, GbdtParams};

/// A 2×2 Hermitian Gaussian kernel on the midpoint grid of step `h`.
pub fn gaussian_kernel(h: f64, len: usize) -> DifferenceKernel {
    let m = CMat::from_row_slice(2, 2, &[c64(0.4, 0.0), c64(0.1, 0.2), c64(0.1, -0.2), c64(-0.3, 0.0)]);
    DifferenceKernel::from_fn(2, h, len, |x| &m * c64(0.5 * (-x * x).exp(), 0.0))
}

/// The two-channel fixture used by the CLI tests; its state has a closed form.
pub fn pair_params() -> GbdtParams {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../cli/fixtures/pair.json");
    weylkit::io::read_json(path.as_ref()).expect("fixture is readable")
}

/// Parameters with `n = 3`, `p = 2`, `D < 0` whose `α` is resonant, so the state
/// goes through quadrature instead of the closed form.
pub fn resonant_params() -> GbdtParams {
    let a = CMat::from_fn(3, 3, |i, j| c64(0.3 * (i + j) as f64 - 0.4, 0.1 * i as f64 - 0.2 * j as f64));
    let l1 = CMat::from_fn(3, 2, |i, j| c64(0.2 + 0.1 * i as f64, -0.15 * j as f64));
    let l2 = CMat::from_fn(3, 2, |i, j| c64(0.1 * j as f64, 0.25 - 0.05 * i as f64)) * I;
    GbdtParams::from_hermitian_part(&a, l1, l2, vec![-1.0, -2.0]).expect("valid by construction")
}
