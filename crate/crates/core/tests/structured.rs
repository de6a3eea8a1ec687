mod common;

use common::{gaussian_kernel, rng, well_conditioned_system};
use weylkit::linalg::{c64, fro, hermitian_eigenvalues, identity, inverse, j_matrix};
use weylkit::structured::canonical::fundamental_from_factor;
use weylkit::structured::{
    canonical_from_kernel, fundamental_from_kernel, hamiltonian_by_dbdl, weyl_disk_approx, DiskOptions,
    FnHamiltonian,
};

#[test]
fn disk_oracle_matches_gbdt_weyl_function() {
    let mut r = rng(2024);
    for (n, p) in [(2, 1), (1, 2), (2, 1), (3, 1)] {
        let sys = well_conditioned_system(&mut r, n, p, 40.0);
        let pair = sys.weyl_pair();
        let ham = FnHamiltonian { p, f: |x: f64| sys.hamiltonian(x).unwrap() };
        for z in [c64(0.0, 1.0), c64(0.0, 2.0), c64(1.0, 1.0)] {
            let res = weyl_disk_approx(&ham, z, &DiskOptions::default()).unwrap();
            let phi = pair.phi(z).unwrap();
            let err = fro(&(&res.phi - &phi));
            assert!(err < 1e-6, "z = {z}: {err}");
        }
    }
}

#[test]
fn canonical_identities() {
    let h = 1.0 / 256.0;
    let d = [-1.0, -2.0];
    let k = gaussian_kernel(h, 512, 0.5);
    let data = canonical_from_kernel(&k, &d, 1.0).unwrap();
    assert!(data.factor_residual < 1e-8, "{}", data.factor_residual);
    let jm = j_matrix(2);
    let dmat = weylkit::linalg::diag_real(&d);
    let worst = data.beta.values.iter().map(|b| fro(&(b * &jm * b.adjoint() - &dmat))).fold(0.0, f64::max);
    assert!(worst < 1e-3, "beta J beta* - D: {worst}");
    for j in [10usize, 100, 200] {
        let dbdl = hamiltonian_by_dbdl(&k, &d, j).unwrap();
        let mid = (&data.hamiltonian.values[j - 1] + &data.hamiltonian.values[j]) * c64(0.5, 0.0);
        let err = fro(&(dbdl - mid));
        assert!(err < 5e-4, "j = {j}: {err}");
    }
}

#[test]
fn borg_marchenko_truncation() {
    let h = 1.0 / 256.0;
    let d = [-1.0, -2.0];
    let dmax = 2.0;
    let l = 1.0;
    let k = gaussian_kernel(h, 512, 0.5);
    let cut = k.truncated(256);
    let full = canonical_from_kernel(&k, &d, l).unwrap();
    let trunc = canonical_from_kernel(&cut, &d, l).unwrap();
    let diff = full.hamiltonian.sup_distance(&trunc.hamiltonian, 0.0, l / dmax - h).unwrap();
    assert!(diff < 1e-3, "{diff}");
    // Beyond 1/d the truncation is visible.
    let far = full.hamiltonian.sup_distance(&trunc.hamiltonian, 0.75, l).unwrap();
    assert!(far > 1e-6);
}

#[test]
fn fundamental_from_kernel_properties() {
    let h = 1.0 / 128.0;
    let d = [-1.0, -2.0];
    let k = gaussian_kernel(h, 256, 0.5);
    let data = canonical_from_kernel(&k, &d, 1.0).unwrap();
    let z = c64(0.5, 0.8);
    let w_z = fundamental_from_factor(&k, &d, &data.factor, z);
    let w_zb = fundamental_from_factor(&k, &d, &data.factor, z.conj());
    assert_eq!(fundamental_from_kernel(&k, &d, 1.0, c64(0.0, 0.0)).unwrap(), identity(4));
    // r(l, z) = −[I 0](W*)⁻¹JW⁻¹[I; 0] with W = w(l, z̄)* is positive.
    let big_w = w_zb.adjoint();
    let wi = inverse(&big_w).unwrap();
    let m = -(wi.adjoint() * j_matrix(2) * &wi);
    let r = m.view((0, 0), (2, 2)).into_owned();
    let herm = (&r + r.adjoint()) * c64(0.5, 0.0);
    assert!(fro(&(&r - &herm)) < 1e-6 * fro(&r));
    assert!(hermitian_eigenvalues(&herm)[0] > 0.0, "{r}");
    // J-property inherited from the canonical system.
    let res = fro(&(w_zb.adjoint() * j_matrix(2) * &w_z - j_matrix(2)));
    assert!(res < 1e-2, "{res}");
}
