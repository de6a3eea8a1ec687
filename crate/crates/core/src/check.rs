//! Invariant suite run by `weylkit check`.
//!
//! Every row is a single measured quantity compared against a fixed
//! tolerance. The suite is deterministic: no random draws, only the inputs it
//! is given plus a few built-in closed-form cases.

use serde::Serialize;

use crate::fourier::{amplitude_from_weyl, herglotz_check, AmplitudeMode, AmplitudeOptions, WeylSampler};
use crate::gbdt::{j_unitarity_residual, state_identity_residual, GbdtParams, GbdtSystem, IDENTITY_TOL};
use crate::grid::DifferenceKernel;
use crate::interpolation::{coeff_a, coeff_a_exact, coeff_c, coeff_c_all};
use crate::linalg::{c64, diag_real, fro, hermitian_eigenvalues, identity, j_matrix, rank, CMat, I};
use crate::rational::{default_grid, params_from_realization, realization_from_params, validate_realization, Realization};
use crate::structured::canonical_from_kernel;

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckRow {
    fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, passed: value < tolerance }
    }

    fn failed(name: impl Into<String>, why: &crate::Error) -> Self {
        Self { name: format!("{} ({why})", name.into()), value: f64::NAN, tolerance: 0.0, passed: false }
    }
}

/// Sample points of `[0, 2]` used for the `x`-dependent identities.
const XS: [f64; 5] = [0.0, 0.25, 0.5, 1.0, 2.0];

fn ordered_max(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |a, b| if b.is_nan() || b > a { b } else { a })
}

/// Identity checks on one parameter set. For `D < 0` the Weyl function is
/// also checked for the Herglotz property and the realization round trip.
pub fn check_params(label: &str, params: &GbdtParams) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    let report = match params.validate() {
        Ok(r) => r,
        Err(e) => return vec![CheckRow::failed(format!("{label}: parameter identity"), &e)],
    };
    rows.push(CheckRow::below(format!("{label}: parameter identity"), report.relative_residual, IDENTITY_TOL));
    let sys = match GbdtSystem::new(params.clone()) {
        Ok(s) => s,
        Err(e) => {
            rows.push(CheckRow::failed(format!("{label}: system"), &e));
            return rows;
        }
    };
    let z = c64(0.3, 0.7);
    let mut state_res = Vec::new();
    let mut unitarity = Vec::new();
    let mut psd = Vec::new();
    let mut excess_rank = 0usize;
    for &x in &XS {
        let st = match sys.state(x) {
            Ok(s) => s,
            Err(e) => {
                rows.push(CheckRow::failed(format!("{label}: state at x = {x}"), &e));
                return rows;
            }
        };
        state_res.push(state_identity_residual(params, &st));
        let w = sys.transfer_from_state(&st, z).and_then(|wz| Ok((wz, sys.transfer_from_state(&st, z.conj())?)));
        unitarity.push(w.map(|(a, b)| j_unitarity_residual(&a, &b)).unwrap_or(f64::INFINITY));
        match sys.hamiltonian(x) {
            Ok(h) => {
                let scale = fro(&h).max(1.0);
                psd.push((-hermitian_eigenvalues(&h)[0] / scale).max(0.0));
                excess_rank = excess_rank.max(rank(&h, 1e-8).saturating_sub(params.p));
            }
            Err(_) => psd.push(f64::INFINITY),
        }
    }
    rows.push(CheckRow::below(format!("{label}: state identity on [0, 2]"), ordered_max(state_res.into_iter()), IDENTITY_TOL));
    rows.push(CheckRow::below(format!("{label}: J-unitarity of w"), ordered_max(unitarity.into_iter()), IDENTITY_TOL));
    rows.push(CheckRow::below(format!("{label}: H positive semidefinite"), ordered_max(psd.into_iter()), 1e-10));
    rows.push(CheckRow::below(format!("{label}: rank H exceeds p by"), excess_rank as f64, 0.5));

    if params.d_negative() {
        match herglotz_check(&WeylSampler::from_gbdt(&sys).expect("D < 0"), &default_grid(), 1.0) {
            Ok(h) => rows.push(CheckRow::below(format!("{label}: Herglotz margin"), (-h.min_im_eigenvalue).max(0.0), 1e-9)),
            Err(e) => rows.push(CheckRow::failed(format!("{label}: Herglotz margin"), &e)),
        }
        let trip = realization_from_params(params)
            .and_then(|r| params_from_realization(&r))
            .and_then(GbdtSystem::new)
            .and_then(|back| {
                let mut worst = 0.0f64;
                for &x in &XS {
                    worst = worst.max(fro(&(sys.hamiltonian(x)? - back.hamiltonian(x)?)));
                }
                Ok(worst)
            });
        match trip {
            Ok(v) => rows.push(CheckRow::below(format!("{label}: realization round trip of H"), v, 1e-8)),
            Err(e) => rows.push(CheckRow::failed(format!("{label}: realization round trip of H"), &e)),
        }
    }
    rows
}

/// Validation of a realization and agreement of `φ` with the Weyl function of
/// the system it generates.
pub fn check_realization(label: &str, r: &Realization) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    match validate_realization(r, &default_grid()) {
        Ok(rep) => {
            rows.push(CheckRow::below(format!("{label}: realization identity"), rep.identity_residual, IDENTITY_TOL));
            rows.push(CheckRow::below(format!("{label}: Herglotz margin"), (-rep.min_im_eigenvalue).max(0.0), 1e-9));
        }
        Err(e) => return vec![CheckRow::failed(format!("{label}: realization"), &e)],
    }
    let agreement = params_from_realization(r).and_then(GbdtSystem::new).and_then(|sys| {
        let pair = sys.weyl_pair();
        let mut worst = 0.0f64;
        for z in default_grid() {
            worst = worst.max(fro(&(pair.phi(z)? - r.eval(z)?)));
        }
        Ok(worst)
    });
    match agreement {
        Ok(v) => rows.push(CheckRow::below(format!("{label}: Weyl function of the generated system"), v, 1e-8)),
        Err(e) => rows.push(CheckRow::failed(format!("{label}: Weyl function of the generated system"), &e)),
    }
    rows
}

/// Factorization residual and `βJβ* = D` for the canonical system of a kernel.
pub fn check_kernel(label: &str, k: &DifferenceKernel, d: &[f64], l: f64) -> Vec<CheckRow> {
    let data = match canonical_from_kernel(k, d, l) {
        Ok(v) => v,
        Err(e) => return vec![CheckRow::failed(format!("{label}: canonical system"), &e)],
    };
    let jm = j_matrix(k.p);
    let dm = diag_real(d);
    let bjb = ordered_max(data.beta.values.iter().map(|b| fro(&(b * &jm * b.adjoint() - &dm))));
    vec![
        CheckRow::below(format!("{label}: factorization residual"), data.factor_residual, 1e-8),
        // The identity holds to first order in the step.
        CheckRow::below(format!("{label}: beta J beta* = D"), bjb, 1e-3),
    ]
}

/// Coefficient recurrences against exact integer arithmetic and products.
pub fn check_coefficients() -> Vec<CheckRow> {
    let mut worst_a = 0.0f64;
    for n in 0..=30 {
        for q in 0..=n {
            let want: f64 = num_traits::ToPrimitive::to_f64(&coeff_a_exact(n, q).expect("q <= n")).unwrap_or(f64::NAN);
            let got = coeff_a(n, q).map(|v| v.value()).unwrap_or(f64::NAN);
            worst_a = worst_a.max(((got - want) / want).abs());
        }
    }
    let lam = c64(2.0, 3.0);
    let mut worst_c = 0.0f64;
    if let Ok(all) = coeff_c_all(30, lam) {
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
            let direct = coeff_c(n, lam).unwrap_or(c64(f64::NAN, 0.0));
            worst_c = worst_c.max((c - want).norm() / want.norm()).max((direct - c).norm() / want.norm());
        }
    } else {
        worst_c = f64::NAN;
    }
    vec![
        CheckRow::below("interpolation: a recurrence vs factorials, n <= 30", worst_a, 1e-12),
        CheckRow::below("interpolation: c recurrence vs products, n <= 30", worst_c, 1e-12),
    ]
}

/// The free Dirac system `φ ≡ iI` must give `s ≡ I/2`.
pub fn check_free_dirac() -> Vec<CheckRow> {
    let phi = WeylSampler::constant(identity(2) * I);
    let opts = AmplitudeOptions::new(AmplitudeMode::Dirac, 1.0 / 64.0, 0.0, 65);
    match amplitude_from_weyl(&phi, &opts) {
        Ok(res) => {
            let half = identity(2) * c64(0.5, 0.0);
            let err = ordered_max(res.s.values.iter().map(|s: &CMat| fro(&(s - &half))));
            vec![CheckRow::below("fourier: free Dirac amplitude is I/2", err, 1e-3)]
        }
        Err(e) => vec![CheckRow::failed("fourier: free Dirac amplitude is I/2", &e)],
    }
}
