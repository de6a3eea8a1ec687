use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use weylkit::fourier::{weyl_from_amplitude, TransformMode};
use weylkit::interpolation::{
    coeff_a, coeff_c, coeff_c_all, decay_estimate, interpolate_series, interpolate_series_exact, partial_sums,
    partial_sums_exact, ExactMatrix, SeriesMode,
};
use weylkit::linalg::{c64, fro, identity, CMat, I};
use weylkit::{Complex64, GridFunction};

type CRat = Complex<BigRational>;

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Exact scalar samples `f(q + ε)` of a rational function of `y = Im z`.
fn exact_samples(n: usize, eps: &BigRational, f: impl Fn(BigRational) -> CRat) -> Vec<ExactMatrix> {
    (0..=n)
        .map(|q| {
            let y = BigRational::from_integer(q.into()) + eps;
            let v = f(y);
            ExactMatrix::from_fn(1, 1, |_, _| v.clone())
        })
        .collect()
}

#[test]
fn a_recurrence_matches_factorials() {
    for n in 0..=30 {
        for q in 0..=n {
            let exact = factorial(n + q) / (factorial(q) * factorial(q) * factorial(n - q));
            let sign = if q % 2 == 1 { -1.0 } else { 1.0 };
            let want = sign * exact.to_f64().unwrap();
            let got = coeff_a(n, q).unwrap().value();
            assert!(((got - want) / want).abs() < 1e-12, "n = {n}, q = {q}");
        }
    }
}

#[test]
fn c_recurrence_matches_products() {
    let lam = c64(2.0, 3.0);
    let all = coeff_c_all(25, lam).unwrap();
    for (n, c) in all.iter().enumerate() {
        let mut num = c64(2.0 * n as f64 + 1.0, 0.0);
        for q in 1..=n {
            num *= c64(q as f64 - 0.5, 0.0) + I * lam;
        }
        let mut den = c64(1.0, 0.0);
        for q in 0..=n {
            den *= c64(q as f64 + 0.5, 0.0) - I * lam;
        }
        let want = num / den;
        assert!((c - want).norm() / want.norm() < 1e-12, "n = {n}");
        assert_eq!(*c, coeff_c(n, lam).unwrap());
    }
}

#[test]
fn general_mode_with_exact_samples() {
    // F(z) = i/z, F(i(q+ε)) = 1/(q+ε).
    let eps = rat(1, 10);
    let samples = exact_samples(60, &eps, |y| CRat::new(y.recip(), BigRational::zero()));
    let z = c64(0.0, 3.0);
    let got = interpolate_series_exact(&samples, z, 60, &eps, SeriesMode::General).unwrap();
    let err = (got[(0, 0)] - I / z).norm();
    assert!(err < 1e-3, "{err}");
}

#[test]
fn rounded_samples_limit_the_useful_order() {
    let eps = 0.1;
    let samples: Vec<CMat> = (0..=60).map(|q| CMat::from_element(1, 1, c64(1.0 / (q as f64 + eps), 0.0))).collect();
    let z = c64(0.0, 3.0);
    let sums = partial_sums(&samples, z, 60, eps, SeriesMode::General).unwrap();
    let err = |n: usize| (sums[n][(0, 0)] - I / z).norm();
    assert!(err(20) < 1e-6, "{}", err(20));
    // Rounding noise of order 1e−16 is amplified by about 5.8ⁿ.
    assert!(err(60) > 1.0, "{}", err(60));
}

#[test]
fn free_dirac_series_and_decay() {
    let eps = 0.1;
    let z = c64(0.0, 3.0);
    let samples = vec![identity(2) * I; 61];
    let sums = partial_sums(&samples, z, 60, eps, SeriesMode::WeylDirac).unwrap();
    let err = |n: usize| fro(&(&sums[n] - identity(2) * I));
    assert!(err(60) < 1e-3, "{}", err(60));
    let pts: Vec<(usize, f64)> = (10..=60).step_by(10).map(|n| (n, err(n))).collect();
    let fit = decay_estimate(&pts).unwrap();
    assert!(fit.exponent <= -(z.im - 0.5 - eps) + 0.3, "{fit:?}");
    assert!(fit.converging);
}

#[test]
fn zero_shift_equals_weyl_dirac() {
    let samples: Vec<CMat> =
        (0..=20).map(|q| CMat::from_element(1, 1, c64(0.3 / (1.0 + q as f64), 1.0 + 0.01 * q as f64))).collect();
    let z = c64(0.4, 2.0);
    let a = interpolate_series(&samples, z, 20, 0.1, SeriesMode::WeylDirac).unwrap();
    let b = interpolate_series(&samples, z, 20, 0.1, SeriesMode::Shifted { z0: c64(0.0, 0.0) }).unwrap();
    assert_eq!(a, b);
}

/// `s = ½ + c x e^{−x}` has `φ(z) = i + 2cz/(1 − iz)²`, rational in `z`, so the
/// lattice values can be supplied exactly.
fn rational_phi(c: f64, z: Complex64) -> Complex64 {
    let w = c64(1.0, 0.0) - I * z;
    I + z * 2.0 * c / (w * w)
}

#[test]
fn consistency_with_laplace_transform() {
    let c = 0.5;
    let h = 1.0 / 256.0;
    let s = GridFunction::from_fn(1, 1, 0.0, h, 40 * 256 + 1, |x| CMat::from_element(1, 1, c64(0.5 + c * x * (-x).exp(), 0.0)));
    let z = c64(0.0, 3.0);
    let direct = weyl_from_amplitude(&s, z, &TransformMode::Dirac).unwrap().phi[(0, 0)];
    assert!((direct - rational_phi(c, z)).norm() < 1e-5);

    // φ(iy) = i(1 + 2cy/(1+y)²) with c = 1/2.
    let eps = rat(1, 10);
    let samples = exact_samples(80, &eps, |y| {
        let one = BigRational::one();
        let d = (&one + &y) * (&one + &y);
        CRat::new(BigRational::zero(), one + y / d)
    });
    let got = interpolate_series_exact(&samples, z, 80, &eps, SeriesMode::WeylDirac).unwrap()[(0, 0)];
    assert!((got - direct).norm() < 1e-2, "{got} vs {direct}");
    assert!((got - rational_phi(c, z)).norm() < 1e-3);
}

#[test]
fn shifted_lattice_with_exact_samples() {
    // z0 = 1/2 + i/4, samples φ(z0 + i(q+ε)) of the rational φ above.
    let z0 = c64(0.5, 0.25);
    let eps = rat(1, 10);
    let samples: Vec<ExactMatrix> = (0..=60)
        .map(|q| {
            // ζ = z0 + iy, y = q + ε; 1 − iζ = (1 + 1/4 + y) − i/2.
            let y = BigRational::from_integer(q.into()) + &eps;
            let zeta = CRat::new(rat(1, 2), rat(1, 4) + &y);
            let w = CRat::new(rat(5, 4) + &y, rat(-1, 2));
            let v = CRat::new(BigRational::zero(), BigRational::one()) + zeta / (w.clone() * w);
            ExactMatrix::from_fn(1, 1, |_, _| v.clone())
        })
        .collect();
    let z = c64(0.3, 2.5);
    let sums = partial_sums_exact(&samples, z, 60, &eps, SeriesMode::Shifted { z0 }).unwrap();
    let want = rational_phi(0.5, z + z0);
    let err = (sums[60][(0, 0)] - want).norm();
    assert!(err < 1e-3, "{err}");
}
