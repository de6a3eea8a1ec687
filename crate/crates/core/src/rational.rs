//! Inverse problem for rational Weyl functions.
//!
//! A realization `φ(z) = (i/2)|D| + Ψ1(0)*(γ − z)⁻¹Ψ2` with `D < 0` and
//! `γ − γ* = i(Ψ1(0) − Ψ2)D⁻¹(Ψ1(0) − Ψ2)*` determines the explicit system
//! whose Weyl function it is.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gbdt::{GbdtParams, GbdtSystem, IDENTITY_TOL};
use crate::linalg::{c64, diag_real, eigenvalues, fro, identity, min_hermitian_eigenvalue, solve, zeros, CMat, I};

/// State-space realization of a rational `p×p` Weyl function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub n: usize,
    pub p: usize,
    /// Diagonal of `D`, all negative.
    pub d: Vec<f64>,
    #[serde(with = "crate::io::cmat")]
    pub gamma: CMat,
    #[serde(with = "crate::io::cmat")]
    pub psi1_0: CMat,
    #[serde(with = "crate::io::cmat")]
    pub psi2: CMat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizationReport {
    /// Relative residual of the matrix identity for `γ`.
    pub identity_residual: f64,
    /// Smallest eigenvalue of `Im φ(z)` over the grid.
    pub min_im_eigenvalue: f64,
    /// `‖φ(10⁶ i) − (i/2)|D|‖_F`
    pub infinity_error: f64,
    pub identity_ok: bool,
    pub herglotz_ok: bool,
    pub infinity_ok: bool,
    pub passed: bool,
}

impl Realization {
    pub fn new(gamma: CMat, psi1_0: CMat, psi2: CMat, d: Vec<f64>) -> Result<Self> {
        let r = Self { n: gamma.nrows(), p: d.len(), d, gamma, psi1_0, psi2 };
        r.check_structure()?;
        Ok(r)
    }

    pub fn check_structure(&self) -> Result<()> {
        let (n, p) = (self.n, self.p);
        if p == 0 || self.d.len() != p {
            return Err(Error::Dimension("D must have p > 0 entries".into()));
        }
        if self.gamma.shape() != (n, n) || self.psi1_0.shape() != (n, p) || self.psi2.shape() != (n, p) {
            return Err(Error::Dimension(format!(
                "realization blocks have shapes {:?}, {:?}, {:?} for n = {n}, p = {p}",
                self.gamma.shape(),
                self.psi1_0.shape(),
                self.psi2.shape()
            )));
        }
        if self.d.iter().any(|&v| !(v < 0.0) || !v.is_finite()) {
            return Err(Error::Unsupported("the inverse problem is posed for D < 0 only".into()));
        }
        Ok(())
    }

    /// `φ(∞) = (i/2)|D|`
    pub fn value_at_infinity(&self) -> CMat {
        diag_real(&self.d.iter().map(|v| v.abs()).collect::<Vec<_>>()) * c64(0.0, 0.5)
    }

    pub fn eval(&self, z: Complex64) -> Result<CMat> {
        let mut out = self.value_at_infinity();
        if self.n > 0 {
            let shifted = &self.gamma - identity(self.n) * z;
            let r = solve(&shifted, &self.psi2)
                .map_err(|_| Error::Singular { what: "z is a pole of the realization".into(), z })?;
            out += self.psi1_0.adjoint() * r;
        }
        Ok(out)
    }

    /// Relative residual of `γ − γ* = i(Ψ1(0) − Ψ2)D⁻¹(Ψ1(0) − Ψ2)*`.
    pub fn identity_residual(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let x = &self.psi1_0 - &self.psi2;
        let d_inv = diag_real(&self.d.iter().map(|v| 1.0 / v).collect::<Vec<_>>());
        let lhs = &self.gamma - self.gamma.adjoint();
        let rhs = &x * d_inv * x.adjoint() * I;
        fro(&(lhs - rhs)) / (1.0 + fro(&self.gamma))
    }

    pub fn poles(&self) -> Vec<Complex64> {
        eigenvalues(&self.gamma)
    }
}

/// Checks the identity, Herglotz positivity on `grid` and the value at infinity.
pub fn validate_realization(r: &Realization, grid: &[Complex64]) -> Result<RealizationReport> {
    r.check_structure()?;
    if grid.is_empty() || grid.iter().any(|z| !(z.im > 0.0)) {
        return Err(Error::Domain("validation grid must be nonempty and lie in the open upper half-plane".into()));
    }
    let identity_residual = r.identity_residual();
    let mut min_im_eigenvalue = f64::INFINITY;
    for &z in grid {
        let phi = match r.eval(z) {
            Ok(v) => v,
            Err(_) => {
                min_im_eigenvalue = f64::NEG_INFINITY;
                continue;
            }
        };
        let im = (&phi - phi.adjoint()) * c64(0.0, -0.5);
        min_im_eigenvalue = min_im_eigenvalue.min(min_hermitian_eigenvalue(&im));
    }
    let infinity_error = match r.eval(c64(0.0, 1e6)) {
        Ok(v) => fro(&(v - r.value_at_infinity())),
        Err(_) => f64::INFINITY,
    };
    let identity_ok = identity_residual < IDENTITY_TOL;
    let herglotz_ok = min_im_eigenvalue >= -1e-9;
    let infinity_ok = infinity_error < 1e-4;
    Ok(RealizationReport {
        identity_residual,
        min_im_eigenvalue,
        infinity_error,
        identity_ok,
        herglotz_ok,
        infinity_ok,
        passed: identity_ok && herglotz_ok && infinity_ok,
    })
}

/// A fixed validation grid: a 6×6 lattice in `[-3, 3] × [0.25, 3]`.
pub fn default_grid() -> Vec<Complex64> {
    let mut zs = Vec::with_capacity(36);
    for a in 0..6 {
        for b in 0..6 {
            zs.push(c64(-3.0 + 1.2 * a as f64, 0.25 + 0.55 * b as f64));
        }
    }
    zs
}

/// `Λ1(0) = ½(Ψ1(0) + Ψ2)`, `Λ2(0) = (Ψ1(0) − Ψ2)D⁻¹`, `α = γ + iΨ2Λ2(0)*`.
pub fn params_from_realization(r: &Realization) -> Result<GbdtParams> {
    let report = validate_realization(r, &default_grid())?;
    if !report.passed {
        return Err(Error::Validation(format!(
            "realization rejected: identity residual {:.3e}, min Im eigenvalue {:.3e}, error at infinity {:.3e}",
            report.identity_residual, report.min_im_eigenvalue, report.infinity_error
        )));
    }
    let d_inv = diag_real(&r.d.iter().map(|v| 1.0 / v).collect::<Vec<_>>());
    let lambda1 = (&r.psi1_0 + &r.psi2) * c64(0.5, 0.0);
    let lambda2 = (&r.psi1_0 - &r.psi2) * d_inv;
    let alpha = &r.gamma + &r.psi2 * lambda2.adjoint() * I;
    if r.n == 0 {
        return Err(Error::Dimension("a realization with n = 0 has no parameter matrices".into()));
    }
    GbdtParams::new(alpha, lambda1, lambda2, r.d.clone())
}

/// `γ = α − iΨ2Λ2(0)*` together with `Ψ1(0)`, `Ψ2`.
pub fn realization_from_params(params: &GbdtParams) -> Result<Realization> {
    params.check_structure()?;
    if !params.d_negative() {
        return Err(Error::Unsupported("realization_from_params needs D < 0".into()));
    }
    let report = params.validate()?;
    if !report.passed {
        return Err(Error::Validation(format!("parameter identity residual {:.3e}", report.relative_residual)));
    }
    let psi2 = params.psi2();
    let gamma = &params.alpha - &psi2 * params.lambda2_0.adjoint() * I;
    Realization::new(gamma, params.psi1_0(), psi2, params.d.clone())
}

/// Explicit system generated by a realization, ready for direct evaluation.
pub fn system_from_realization(r: &Realization) -> Result<GbdtSystem> {
    GbdtSystem::new(params_from_realization(r)?)
}

/// Builds `φ(z) = (i/2)|D| + Σ_m R_m (λ_m − z)⁻¹` as a realization with
/// block-diagonal `γ`.
///
/// Each residue is factored by SVD, `R = C B`, with the free scale between
/// `C` and `B` fixed so that the trace of the diagonal identity block holds.
/// The full identity is then checked; it is not automatic when several poles
/// are present or a residue has rank above one.
pub fn realization_from_pole_data(poles: &[Complex64], residues: &[CMat], d: &[f64]) -> Result<Realization> {
    let p = d.len();
    if poles.len() != residues.len() {
        return Err(Error::Dimension(format!("{} poles but {} residues", poles.len(), residues.len())));
    }
    if let Some(m) = residues.iter().position(|r| r.shape() != (p, p)) {
        return Err(Error::Dimension(format!("residue {m} is not {p}x{p}")));
    }
    if d.iter().any(|&v| !(v < 0.0)) {
        return Err(Error::Unsupported("pole data realizations need D < 0".into()));
    }
    for (m, &lam) in poles.iter().enumerate() {
        if lam.im > -1e-10 {
            return Err(Error::Domain(format!("pole {m} at {lam} is not in the open lower half-plane")));
        }
        if poles[..m].iter().any(|&o| (o - lam).norm() < 1e-10) {
            return Err(Error::Domain(format!("pole {m} at {lam} is repeated")));
        }
    }
    let d_inv = diag_real(&d.iter().map(|v| 1.0 / v).collect::<Vec<_>>());
    let mut blocks_c: Vec<CMat> = Vec::new();
    let mut blocks_b: Vec<CMat> = Vec::new();
    let mut block_poles: Vec<Complex64> = Vec::new();
    for (m, (lam, res)) in poles.iter().zip(residues).enumerate() {
        let svd = res.clone().svd(true, true);
        let (u, v_t) = (svd.u.unwrap(), svd.v_t.unwrap());
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let keep: Vec<usize> =
            (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > 1e-12 * smax && smax > 0.0).collect();
        if keep.is_empty() {
            continue;
        }
        let r = keep.len();
        // Ψ1 block (r×p) is C*, Ψ2 block is B, up to the scale t.
        let mut x = zeros(r, p);
        let mut y = zeros(r, p);
        for (row, &k) in keep.iter().enumerate() {
            let s = svd.singular_values[k].sqrt();
            for col in 0..p {
                x[(row, col)] = u[(col, k)].conj() * s;
                y[(row, col)] = v_t[(k, col)] * s;
            }
        }
        // tr((tX − Y/t) D⁻¹ (tX − Y/t)*) = 2 r Im λ, a quadratic in u = t².
        let a = (&x * &d_inv * x.adjoint()).trace().re;
        let b = (&x * &d_inv * y.adjoint()).trace().re;
        let c = (&y * &d_inv * y.adjoint()).trace().re;
        let e = 2.0 * r as f64 * lam.im;
        let (qa, qb, qc) = (a, -(2.0 * b + e), c);
        let disc = qb * qb - 4.0 * qa * qc;
        let roots: Vec<f64> = if qa.abs() < 1e-300 {
            vec![-qc / qb]
        } else if disc >= 0.0 {
            let sq = disc.sqrt();
            vec![(-qb + sq) / (2.0 * qa), (-qb - sq) / (2.0 * qa)]
        } else {
            vec![]
        };
        let t = roots
            .into_iter()
            .filter(|u| u.is_finite() && *u > 0.0)
            .map(f64::sqrt)
            .next()
            .ok_or_else(|| {
                Error::Validation(format!(
                    "residue {m} at pole {lam} admits no factorization satisfying the gamma identity"
                ))
            })?;
        blocks_c.push(&x * c64(t, 0.0));
        blocks_b.push(&y * c64(1.0 / t, 0.0));
        block_poles.push(*lam);
    }
    let n: usize = blocks_c.iter().map(|b| b.nrows()).sum();
    let mut gamma = zeros(n, n);
    let mut psi1 = zeros(n, p);
    let mut psi2 = zeros(n, p);
    let mut off = 0;
    for ((c, b), lam) in blocks_c.iter().zip(&blocks_b).zip(&block_poles) {
        let r = c.nrows();
        for k in 0..r {
            gamma[(off + k, off + k)] = *lam;
        }
        psi1.view_mut((off, 0), (r, p)).copy_from(c);
        psi2.view_mut((off, 0), (r, p)).copy_from(b);
        off += r;
    }
    let real = Realization { n, p, d: d.to_vec(), gamma, psi1_0: psi1, psi2 };
    if n > 0 {
        let report = validate_realization(&real, &default_grid())?;
        if !report.identity_ok {
            return Err(Error::Validation(format!(
                "pole/residue data violate the gamma identity (relative residual {:.3e})",
                report.identity_residual
            )));
        }
        if !report.herglotz_ok {
            return Err(Error::Validation(format!(
                "pole/residue data are not Herglotz (min Im eigenvalue {:.3e})",
                report.min_im_eigenvalue
            )));
        }
    }
    Ok(real)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(z: Complex64) -> CMat {
        CMat::from_element(1, 1, z)
    }

    #[test]
    fn equal_psi_with_hermitian_gamma_passes() {
        let g = CMat::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.5, 0.5), c64(0.5, -0.5), c64(-1.0, 0.0)]);
        let psi = CMat::from_row_slice(2, 1, &[c64(0.3, 0.1), c64(-0.2, 0.4)]);
        let r = Realization::new(g.clone(), psi.clone(), psi.clone(), vec![-1.0]).unwrap();
        // A Hermitian γ has real poles, so stay off the real axis.
        let rep = validate_realization(&r, &default_grid()).unwrap();
        assert!(rep.identity_ok);
        let prm = params_from_realization(&r).unwrap();
        assert!(fro(&prm.lambda2_0) == 0.0);
        assert_eq!(prm.lambda1_0, psi);
        assert_eq!(prm.alpha, g);
    }

    #[test]
    fn wrong_sign_identity_fails() {
        let g = one(c64(0.0, 0.5));
        let r = Realization::new(g, one(c64(1.0, 0.0)), one(c64(0.0, 0.0)), vec![-2.0]).unwrap();
        let rep = validate_realization(&r, &default_grid()).unwrap();
        assert!(!rep.identity_ok && !rep.passed);
        assert!(matches!(params_from_realization(&r), Err(Error::Validation(_))));
    }

    #[test]
    fn scalar_round_trip() {
        // Ψ1(0) = 0, Ψ2 = 2, D = −2, any γ: φ ≡ i.
        let r = Realization::new(one(c64(0.0, -1.0)), one(c64(0.0, 0.0)), one(c64(2.0, 0.0)), vec![-2.0]).unwrap();
        let prm = params_from_realization(&r).unwrap();
        assert!((prm.lambda1_0[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((prm.lambda2_0[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((prm.alpha[(0, 0)] - I).norm() < 1e-15);
        let phi = GbdtSystem::new(prm).unwrap().weyl_pair().phi(c64(0.5, 1.0)).unwrap();
        assert!((phi[(0, 0)] - I).norm() < 1e-14);
    }

    #[test]
    fn positive_d_is_unsupported() {
        let prm = GbdtParams::new(identity(1), zeros(1, 1), zeros(1, 1), vec![1.0]).unwrap();
        assert!(matches!(realization_from_params(&prm), Err(Error::Unsupported(_))));
    }

    #[test]
    fn pole_data_empty_and_upper_half_plane() {
        let r = realization_from_pole_data(&[], &[], &[-2.0]).unwrap();
        assert_eq!(r.n, 0);
        assert!((r.eval(c64(1.0, 1.0)).unwrap()[(0, 0)] - I).norm() < 1e-15);
        assert!(matches!(
            realization_from_pole_data(&[I], &[one(c64(1.0, 0.0))], &[-2.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pole_data_reproduces_scalar_realization() {
        // From α = i, Λ1 = 3/2, Λ2 = 2/3, D = −2: Ψ1 = 5/6, Ψ2 = 13/6, γ = −4i/9.
        let prm = GbdtParams::new(one(I), one(c64(1.5, 0.0)), one(c64(2.0 / 3.0, 0.0)), vec![-2.0]).unwrap();
        let known = realization_from_params(&prm).unwrap();
        assert!((known.gamma[(0, 0)] - c64(0.0, -4.0 / 9.0)).norm() < 1e-15);
        let pole = known.gamma[(0, 0)];
        // Ψ1*(γ − z)⁻¹Ψ2 = −Ψ1*Ψ2 (z − γ)⁻¹ = R (λ − z)⁻¹ with R = Ψ1*Ψ2.
        let res = known.psi1_0.adjoint() * &known.psi2;
        let built = realization_from_pole_data(&[pole], &[res], &[-2.0]).unwrap();
        for z in default_grid() {
            let a = known.eval(z).unwrap();
            let b = built.eval(z).unwrap();
            assert!(fro(&(a - b)) < 1e-12);
        }
    }
}
