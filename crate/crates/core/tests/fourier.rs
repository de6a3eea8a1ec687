mod common;

use common::{gaussian_k, gaussian_kernel, rng, upper_half_grid, well_conditioned_system};
use weylkit::fourier::{
    amplitude_from_weyl, constant_potential_weyl, herglotz_check, weyl_from_amplitude, AmplitudeMode,
    AmplitudeOptions, TransformMode, WeylSampler,
};
use weylkit::linalg::{c64, fro, hstack, identity, j_matrix, CMat, I};
use weylkit::structured::canonical::CanonicalAmplitude;
use weylkit::structured::{build_structured_operator, factorize_triangular, potential_from_factor, theta_from_factor, PotentialMode};
use weylkit::{DifferenceKernel, GridFunction};

const D: [f64; 2] = [-1.0, -2.0];

/// `s` of the Gaussian kernel on the nodes `j h`, `j ≤ X/h`.
fn gaussian_amplitude(h: f64, x_end: f64) -> (DifferenceKernel, GridFunction) {
    let n = (x_end / h).round() as usize;
    let k = gaussian_kernel(h, n + 8, 0.5);
    let amp = CanonicalAmplitude::new(&k, &D);
    let s = GridFunction::from_fn(2, 2, 0.0, h, n + 1, |x| amp.eval(x));
    (k, s)
}

fn sampler_from_amplitude(s: GridFunction, mode: TransformMode) -> WeylSampler {
    WeylSampler::from_fn(s.rows, move |z| Ok(weyl_from_amplitude(&s, z, &mode)?.phi))
}

fn relative_l2(a: &[CMat], b: &[CMat]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| fro(&(x - y)).powi(2)).sum();
    let den: f64 = b.iter().map(|y| fro(y).powi(2)).sum();
    (num / den).sqrt()
}

#[test]
fn free_dirac_gives_constant_half() {
    let h = 1.0 / 256.0;
    let phi = WeylSampler::constant(identity(2) * I);
    let res = amplitude_from_weyl(&phi, &AmplitudeOptions::new(AmplitudeMode::Dirac, h, 0.0, 513)).unwrap();
    let worst = res.s.values.iter().map(|s| fro(&(s - identity(2) * c64(0.5, 0.0)))).fold(0.0, f64::max);
    assert!(worst < 1e-3, "{worst}");
    assert!(res.k.values.iter().all(|k| fro(k) < 1e-3));
    assert!(res.warnings.is_empty(), "{:?}", res.warnings);
}

#[test]
fn dirac_and_chi_modes_agree() {
    let s = GridFunction::from_fn(2, 2, 0.0, 0.01, 1001, |x| {
        let e = (-x).exp();
        CMat::from_row_slice(2, 2, &[c64(0.5 + x * e, 0.0), c64(0.2 * x * e, 0.1 * x * x * e), c64(0.0, 0.3 * x * e), c64(0.5, 0.0)])
    });
    for z in [c64(0.0, 1.0), c64(2.0, 0.5), c64(-1.0, 3.0)] {
        let a = weyl_from_amplitude(&s, z, &TransformMode::Dirac).unwrap();
        let b = weyl_from_amplitude(&s, z, &TransformMode::Chi).unwrap();
        assert!(fro(&(&a.phi - &b.phi)) < 1e-8, "{z}: {}", fro(&(&a.phi - &b.phi)));
    }
}

#[test]
fn canonical_limit_at_infinity() {
    let (_, s) = gaussian_amplitude(1.0 / 256.0, 6.0);
    let mode = TransformMode::Canonical { d: D.to_vec() };
    let limit = weylkit::linalg::diag_real(&[0.5, 1.0]) * I;
    for r in [10.0, 100.0, 1000.0] {
        let phi = weyl_from_amplitude(&s, c64(0.0, r), &mode).unwrap().phi;
        let err = fro(&(phi - &limit));
        // φ(iR) − φ∞ ≈ −D k(0)/R, so R·err stays bounded.
        assert!(r * err < 2.0, "R = {r}: {err}");
    }
}

#[test]
fn canonical_round_trip_and_eta_independence() {
    let h = 1.0 / 256.0;
    let (_, s) = gaussian_amplitude(h, 6.0);
    let phi = sampler_from_amplitude(s, TransformMode::Canonical { d: D.to_vec() });
    let len = 4 * 256;
    let truth: Vec<CMat> = (0..len).map(|j| gaussian_k((j as f64 + 0.5) * h, 0.5)).collect();
    let mut ks = Vec::new();
    for eta in [1.0, 2.0] {
        let mut opts = AmplitudeOptions::new(AmplitudeMode::Canonical { d: D.to_vec() }, h, 0.5 * h, len);
        opts.eta = eta;
        let res = amplitude_from_weyl(&phi, &opts).unwrap();
        let err = relative_l2(&res.k.values, &truth);
        assert!(err < 1e-2, "eta = {eta}: {err}");
        ks.push(res.k.values);
    }
    let between = relative_l2(&ks[0], &ks[1]);
    assert!(between < 2e-2, "{between}");
}

#[test]
fn dirac_round_trip() {
    let h = 1.0 / 256.0;
    let n = 6 * 256;
    let s = GridFunction::from_fn(2, 2, 0.0, h, n + 1, |x| {
        let k0 = weylkit::linalg::identity(2) * c64(0.5, 0.0);
        // s = ½ + ∫ k for the Gaussian k in closed form via erf-free primitive
        // (sampled finely, then integrated by the trapezoid rule).
        let steps = 64;
        let dt = x / steps as f64;
        let mut acc = k0;
        for i in 0..steps {
            let t = (i as f64 + 0.5) * dt;
            acc += gaussian_k(t, 0.5) * c64(dt, 0.0);
        }
        acc
    });
    let phi = sampler_from_amplitude(s.clone(), TransformMode::Dirac);
    let res = amplitude_from_weyl(&phi, &AmplitudeOptions::new(AmplitudeMode::Dirac, h, 0.0, 4 * 256 + 1)).unwrap();
    let truth: Vec<CMat> = s.values[..res.s.len()].to_vec();
    let err = relative_l2(&res.s.values, &truth);
    assert!(err < 1e-3, "{err}");
}

#[test]
fn linearity() {
    let h = 1.0 / 128.0;
    let mut r = rng(7);
    let sys = well_conditioned_system(&mut r, 2, 1, 1.0);
    let a = WeylSampler::from_gbdt(&sys).unwrap();
    let b = WeylSampler::from_fn(1, |z| Ok(CMat::from_element(1, 1, constant_potential_weyl(c64(0.3, 0.1), z))));
    let (a2, b2) = (a.clone(), b.clone());
    // The mean keeps φ∞ = i, which the transform assumes.
    let mean = WeylSampler::from_fn(1, move |z| Ok((a2.eval(z)? + b2.eval(z)?) * c64(0.5, 0.0)));
    let opts = AmplitudeOptions::new(AmplitudeMode::Dirac, h, 0.0, 129);
    let sa = amplitude_from_weyl(&a, &opts).unwrap().s;
    let sb = amplitude_from_weyl(&b, &opts).unwrap().s;
    let sm = amplitude_from_weyl(&mean, &opts).unwrap().s;
    for j in 0..sm.len() {
        let err = fro(&(&sm.values[j] - (&sa.values[j] + &sb.values[j]) * c64(0.5, 0.0)));
        assert!(err < 1e-10, "{j}: {err}");
    }
}

#[test]
fn herglotz_check_on_gbdt_weyl_functions() {
    let mut r = rng(11);
    for (n, p) in [(2, 1), (3, 2), (4, 2)] {
        let sys = well_conditioned_system(&mut r, n, p, 1.0);
        let rep = herglotz_check(&WeylSampler::from_gbdt(&sys).unwrap(), &upper_half_grid(7), 1.0).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.integrability.is_finite() && rep.integrability > 0.0);
    }
}

/// Constant potential `v = 0.5` recovered from its closed-form Weyl function
/// through `s`, `k`, and the triangular factorization.
#[test]
fn constant_potential_chain() {
    let v = 0.5;
    let h = 1.0 / 512.0;
    let l = 2.0;
    let m = (l / h) as usize;
    let phi = WeylSampler::from_fn(1, move |z| Ok(CMat::from_element(1, 1, constant_potential_weyl(c64(v, 0.0), z))));
    let res = amplitude_from_weyl(&phi, &AmplitudeOptions::new(AmplitudeMode::Dirac, h, 0.5 * h, m)).unwrap();
    let k = DifferenceKernel::from_grid(&res.k).unwrap();
    let f = factorize_triangular(&build_structured_operator(&k, l, None).unwrap()).unwrap();
    let pot = potential_from_factor(&f, &k, PotentialMode::Endpoint);
    let err = pot.values.iter().map(|p| (p[(0, 0)] - v).norm()).fold(0.0, f64::max);
    assert!(err < 2e-2, "{err}");
    let edge = potential_from_factor(&f, &k, PotentialMode::KernelEdge);
    assert!(pot.sup_distance(&edge, 0.05, 0.95).unwrap() < 5e-3);

    let (t1, t2) = theta_from_factor(&f, &k);
    let jm = j_matrix(1);
    let worst = t1.values.iter().zip(&t2.values).map(|(a, b)| fro(&(a * &jm * b.adjoint()))).fold(0.0, f64::max);
    assert!(worst < 1e-2, "theta1 J theta2*: {worst}");
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!(fro(&(&t1.values[0] - hstack(&identity(1), &identity(1)) * c64(r, 0.0))) < 1e-2);
}
