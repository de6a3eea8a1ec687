//! Explicit direct problem for canonical systems generated by a GBDT
//! (generalized Bäcklund-Darboux transformation) of the constant system
//! `w' = i z J H0 w`, `H0 = [D/2; I][D/2  I]`.
//!
//! Everything here is closed form: the state `Ψ1(x)`, `Λ(x)`, `Σ(x)` comes from
//! matrix exponentials of `α`, the transfer matrix `w_α` from a resolvent, and
//! the Weyl functions from a state-space realization.

use nalgebra::{Dyn, LU};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, diag_real, eigenvalues, expm, hermitize, hstack, identity, inverse, j_matrix, min_hermitian_eigenvalue, solve,
    sylvester_operator, vstack, zeros, CMat, I,
};
use crate::quad::{adaptive_gk, DormandPrince};

/// Relative tolerance for every matrix identity check.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Pole proximity cutoff, scaled by `1 + ‖α‖`.
pub const POLE_TOL: f64 = 1e-12;
/// Sylvester closed form is used only when `|λ_a - conj(λ_b)|` stays above
/// this (relative) gap; otherwise `Σ` is integrated by quadrature.
const RESONANCE_GAP: f64 = 1e-6;

/// Parameter matrices `(α, Λ1(0), Λ2(0), D)` of an explicit canonical system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbdtParams {
    pub n: usize,
    pub p: usize,
    /// Diagonal of `D`; every entry must be nonzero.
    pub d: Vec<f64>,
    #[serde(with = "crate::io::cmat")]
    pub alpha: CMat,
    #[serde(with = "crate::io::cmat")]
    pub lambda1_0: CMat,
    #[serde(with = "crate::io::cmat")]
    pub lambda2_0: CMat,
}

/// Outcome of [`GbdtParams::validate`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsReport {
    /// `‖α − α* − iΛ(0)JΛ(0)*‖_F`
    pub residual: f64,
    /// `residual / (‖α‖_F + 1)`
    pub relative_residual: f64,
    pub passed: bool,
    pub alpha_invertible: bool,
    pub d_negative: bool,
}

impl GbdtParams {
    pub fn new(alpha: CMat, lambda1_0: CMat, lambda2_0: CMat, d: Vec<f64>) -> Result<Self> {
        let params = Self { n: alpha.nrows(), p: d.len(), d, alpha, lambda1_0, lambda2_0 };
        params.check_structure()?;
        Ok(params)
    }

    /// Builds parameters satisfying the identity by construction:
    /// `α = A + (i/2) Λ(0) J Λ(0)*` with `A` Hermitized first.
    pub fn from_hermitian_part(a: &CMat, lambda1_0: CMat, lambda2_0: CMat, d: Vec<f64>) -> Result<Self> {
        let lambda = hstack(&lambda1_0, &lambda2_0);
        let p = d.len();
        let k = &lambda * j_matrix(p) * lambda.adjoint();
        let alpha = hermitize(a) + k * c64(0.0, 0.5);
        Self::new(alpha, lambda1_0, lambda2_0, d)
    }

    pub fn check_structure(&self) -> Result<()> {
        let (n, p) = (self.n, self.p);
        if n == 0 || p == 0 {
            return Err(Error::Dimension("n and p must be positive".into()));
        }
        if self.d.len() != p {
            return Err(Error::Dimension(format!("D has {} entries, expected p = {p}", self.d.len())));
        }
        if self.alpha.shape() != (n, n) {
            return Err(Error::Dimension(format!("alpha is {:?}, expected ({n}, {n})", self.alpha.shape())));
        }
        for (name, m) in [("lambda1_0", &self.lambda1_0), ("lambda2_0", &self.lambda2_0)] {
            if m.shape() != (n, p) {
                return Err(Error::Dimension(format!("{name} is {:?}, expected ({n}, {p})", m.shape())));
            }
        }
        if self.d.iter().any(|&v| v == 0.0 || !v.is_finite()) {
            return Err(Error::Dimension("D must have finite nonzero entries".into()));
        }
        Ok(())
    }

    /// Checks `α − α* = iΛ(0)JΛ(0)*`.
    pub fn validate(&self) -> Result<ParamsReport> {
        self.check_structure()?;
        let lambda = self.lambda0();
        let lhs = &self.alpha - self.alpha.adjoint();
        let rhs = &lambda * j_matrix(self.p) * lambda.adjoint() * I;
        let residual = crate::linalg::fro(&(lhs - rhs));
        let relative_residual = residual / (crate::linalg::fro(&self.alpha) + 1.0);
        let scale = 1.0 + crate::linalg::fro(&self.alpha);
        let alpha_invertible = eigenvalues(&self.alpha).iter().all(|l| l.norm() > POLE_TOL * scale);
        Ok(ParamsReport {
            residual,
            relative_residual,
            passed: relative_residual < IDENTITY_TOL,
            alpha_invertible,
            d_negative: self.d_negative(),
        })
    }

    pub fn d_negative(&self) -> bool {
        self.d.iter().all(|&v| v < 0.0)
    }

    /// `Λ(0) = [Λ1(0)  Λ2(0)]`
    pub fn lambda0(&self) -> CMat {
        hstack(&self.lambda1_0, &self.lambda2_0)
    }

    pub fn d_matrix(&self) -> CMat {
        diag_real(&self.d)
    }

    pub fn abs_d(&self) -> Vec<f64> {
        self.d.iter().map(|v| v.abs()).collect()
    }

    /// `Ψ1(0) = Λ1(0) + ½Λ2(0)D`
    pub fn psi1_0(&self) -> CMat {
        &self.lambda1_0 + &self.lambda2_0 * self.d_matrix() * c64(0.5, 0.0)
    }

    /// `Ψ2 = Λ1(0) − ½Λ2(0)D`, constant in `x`.
    pub fn psi2(&self) -> CMat {
        &self.lambda1_0 - &self.lambda2_0 * self.d_matrix() * c64(0.5, 0.0)
    }

    /// `H0 = [D/2; I][D/2  I]`
    pub fn h0(&self) -> CMat {
        let half_d = self.d_matrix() * c64(0.5, 0.0);
        let col = vstack(&half_d, &identity(self.p));
        &col * col.adjoint()
    }

    /// `Z = [[I, I], [D/2, −D/2]]`
    pub fn z_matrix(&self) -> CMat {
        let p = self.p;
        let half_d = self.d_matrix() * c64(0.5, 0.0);
        vstack(&hstack(&identity(p), &identity(p)), &hstack(&half_d, &(-half_d.clone())))
    }

    /// `Z⁻¹ = [[½I, D⁻¹], [½I, −D⁻¹]]`
    pub fn z_inverse(&self) -> CMat {
        let p = self.p;
        let half = identity(p) * c64(0.5, 0.0);
        let d_inv = diag_real(&self.d.iter().map(|v| 1.0 / v).collect::<Vec<_>>());
        vstack(&hstack(&half, &d_inv), &hstack(&half, &(-d_inv.clone())))
    }
}

/// The GBDT state at a point `x`.
#[derive(Debug, Clone)]
pub struct GbdtState {
    pub x: f64,
    pub psi1: CMat,
    pub psi2: CMat,
    /// `Λ(x) = [Ψ1(x)  Ψ2] Z⁻¹`
    pub lambda: CMat,
    /// `Σ(x) = I + ∫_0^x Ψ1 Ψ1* dt`, Hermitian and `⪰ I`.
    pub sigma: CMat,
}

#[derive(Debug)]
enum SigmaRoute {
    /// LU of the operator `X ↦ αX − Xα*`.
    ClosedForm(Box<LU<Complex64, Dyn, Dyn>>),
    Quadrature,
}

/// A validated parameter set with the precomputed pieces needed by every
/// evaluation.
#[derive(Debug)]
pub struct GbdtSystem {
    params: GbdtParams,
    psi1_0: CMat,
    psi2: CMat,
    alpha_eigs: Vec<Complex64>,
    alpha_scale: f64,
    sigma_route: SigmaRoute,
    /// `w_α(0, 0)⁻¹`, present iff `α` is invertible.
    w_alpha_00_inv: Option<CMat>,
    h0: CMat,
    j: CMat,
}

impl GbdtSystem {
    pub fn new(params: GbdtParams) -> Result<Self> {
        let report = params.validate()?;
        if !report.passed {
            return Err(Error::Validation(format!(
                "alpha - alpha* = i Lambda J Lambda* violated: relative residual {:.3e}",
                report.relative_residual
            )));
        }
        let alpha_eigs = eigenvalues(&params.alpha);
        let alpha_scale = 1.0 + crate::linalg::fro(&params.alpha);
        let gap = alpha_eigs
            .iter()
            .flat_map(|a| alpha_eigs.iter().map(move |b| (a - b.conj()).norm()))
            .fold(f64::INFINITY, f64::min);
        let sigma_route = if gap > RESONANCE_GAP * alpha_scale {
            let op = sylvester_operator(&params.alpha, &params.alpha.adjoint());
            SigmaRoute::ClosedForm(Box::new(op.lu()))
        } else {
            SigmaRoute::Quadrature
        };
        let mut system = Self {
            psi1_0: params.psi1_0(),
            psi2: params.psi2(),
            h0: params.h0(),
            j: j_matrix(params.p),
            alpha_eigs,
            alpha_scale,
            sigma_route,
            w_alpha_00_inv: None,
            params,
        };
        if report.alpha_invertible {
            let state0 = system.state(0.0)?;
            let w00 = system.transfer_from_state(&state0, Complex64::new(0.0, 0.0))?;
            system.w_alpha_00_inv = Some(inverse(&w00)?);
        }
        Ok(system)
    }

    pub fn params(&self) -> &GbdtParams {
        &self.params
    }

    pub fn p(&self) -> usize {
        self.params.p
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    /// True when `Σ` is obtained from Sylvester solves rather than quadrature.
    pub fn sigma_closed_form(&self) -> bool {
        matches!(self.sigma_route, SigmaRoute::ClosedForm(_))
    }

    pub fn alpha_eigenvalues(&self) -> &[Complex64] {
        &self.alpha_eigs
    }

    /// Columns `exp(−i d_k x α) f_k` of `Ψ1(x)`.
    fn psi1_with_propagators(&self, x: f64) -> (CMat, Vec<CMat>) {
        let p = self.params.p;
        let n = self.params.n;
        let mut psi1 = zeros(n, p);
        let mut props = Vec::with_capacity(p);
        for k in 0..p {
            let e = expm(&(&self.params.alpha * c64(0.0, -self.params.d[k] * x)));
            let col = &e * self.psi1_0.column(k);
            psi1.set_column(k, &col);
            props.push(e);
        }
        (psi1, props)
    }

    pub fn psi1(&self, x: f64) -> CMat {
        self.psi1_with_propagators(x).0
    }

    /// Evaluates `Ψ1, Ψ2, Λ, Σ` at `x ≥ 0`.
    pub fn state(&self, x: f64) -> Result<GbdtState> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("x must be a finite nonnegative number, got {x}")));
        }
        let n = self.params.n;
        let (psi1, props) = self.psi1_with_propagators(x);
        let mut sigma = identity(n);
        match &self.sigma_route {
            SigmaRoute::ClosedForm(lu) if x > 0.0 => {
                // α X − X α* = i (Y(x) − F) / d  with  Y(t) = e^{−i d t α} F e^{i d t α*}.
                for (k, e) in props.iter().enumerate() {
                    let f = self.psi1_0.column(k).into_owned();
                    let ff = &f * f.adjoint();
                    if ff.iter().all(|z| z.norm() == 0.0) {
                        continue;
                    }
                    let y = e * &ff * e.adjoint();
                    let rhs = (y - &ff) * c64(0.0, 1.0 / self.params.d[k]);
                    let v = lu
                        .solve(&CMat::from_column_slice(n * n, 1, rhs.as_slice()))
                        .ok_or_else(|| Error::Validation("Sylvester operator is singular".into()))?;
                    sigma += CMat::from_column_slice(n, n, v.as_slice());
                }
            }
            SigmaRoute::Quadrature if x > 0.0 => {
                let integral = adaptive_gk(
                    |t| {
                        let p1 = self.psi1(t);
                        &p1 * p1.adjoint()
                    },
                    0.0,
                    x,
                    1e-12,
                );
                sigma += integral;
            }
            _ => {}
        }
        let sigma = hermitize(&sigma);
        // Σ ⪰ I holds exactly. Once the growing part of Σ swamps the identity
        // in floating point the smallest eigenvalue collapses, and nothing
        // computed from Σ⁻¹ can be trusted.
        if x > 0.0 && n > 1 && !(min_hermitian_eigenvalue(&sigma) > 0.5) {
            return Err(Error::Validation(format!(
                "Sigma(x) is too ill-conditioned to evaluate in double precision at x = {x} (norm {:.3e})",
                crate::linalg::norm2(&sigma)
            )));
        }
        let d_inv = diag_real(&self.params.d.iter().map(|v| 1.0 / v).collect::<Vec<_>>());
        let lambda1 = (&psi1 + &self.psi2) * c64(0.5, 0.0);
        let lambda2 = (&psi1 - &self.psi2) * d_inv;
        Ok(GbdtState { x, psi1, psi2: self.psi2.clone(), lambda: hstack(&lambda1, &lambda2), sigma })
    }

    fn check_pole(&self, z: Complex64) -> Result<()> {
        let dist = self.alpha_eigs.iter().map(|l| (l - z).norm()).fold(f64::INFINITY, f64::min);
        if dist < POLE_TOL * self.alpha_scale {
            return Err(Error::Singular { what: "z is (numerically) an eigenvalue of alpha".into(), z });
        }
        Ok(())
    }

    /// `w_α(x, z) = I − iJΛ(x)*Σ(x)⁻¹(α − zI)⁻¹Λ(x)` for a precomputed state.
    pub fn transfer_from_state(&self, state: &GbdtState, z: Complex64) -> Result<CMat> {
        self.check_pole(z)?;
        let n = self.params.n;
        let shifted = &self.params.alpha - identity(n) * z;
        let resolvent_lambda = solve(&shifted, &state.lambda)
            .map_err(|_| Error::Singular { what: "alpha - z I is singular".into(), z })?;
        let sigma_inv_part = solve(&state.sigma, &resolvent_lambda)?;
        let m = 2 * self.params.p;
        Ok(identity(m) - &self.j * state.lambda.adjoint() * sigma_inv_part * I)
    }

    pub fn transfer_matrix(&self, x: f64, z: Complex64) -> Result<CMat> {
        let state = self.state(x)?;
        self.transfer_from_state(&state, z)
    }

    /// `q0(x) = JΛ*Σ⁻¹ΛJH0 − JH0JΛ*Σ⁻¹Λ`
    fn q0(&self, state: &GbdtState) -> Result<CMat> {
        let core = state.lambda.adjoint() * solve(&state.sigma, &state.lambda)?;
        let j = &self.j;
        Ok(j * &core * j * &self.h0 - j * &self.h0 * j * &core)
    }

    /// `v0(x)` with the normalization `v0(0) = I`.
    ///
    /// For invertible `α` this is `w_α(x, 0) w_α(0, 0)⁻¹`; otherwise `v0' = −q0 v0`
    /// is integrated numerically.
    pub fn v0(&self, x: f64) -> Result<CMat> {
        Ok(self.v0_path(&[x])?.pop().unwrap())
    }

    /// `v0` at several increasing points.
    pub fn v0_path(&self, xs: &[f64]) -> Result<Vec<CMat>> {
        if let Some(bad) = xs.iter().find(|&&x| !(x >= 0.0)) {
            return Err(Error::Domain(format!("x must be nonnegative, got {bad}")));
        }
        match &self.w_alpha_00_inv {
            Some(w00_inv) => xs
                .iter()
                .map(|&x| {
                    let st = self.state(x)?;
                    Ok(self.transfer_from_state(&st, c64(0.0, 0.0))? * w00_inv)
                })
                .collect(),
            None => self.v0_path_ode(xs),
        }
    }

    /// `v0` obtained by integrating `v0' = −q0 v0`, `v0(0) = I` (tolerance 1e-10).
    pub fn v0_path_ode(&self, xs: &[f64]) -> Result<Vec<CMat>> {
        let m = 2 * self.params.p;
        let rhs = |x: f64, v: &CMat| -> CMat {
            let st = self.state(x.max(0.0)).expect("state at nonnegative x");
            let q = self.q0(&st).expect("Sigma is positive definite");
            -(q * v)
        };
        let mut sorted: Vec<f64> = xs.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let values = DormandPrince::new(1e-10).integrate_to(rhs, 0.0, identity(m), &sorted)?;
        Ok(xs
            .iter()
            .map(|x| {
                let idx = sorted.iter().position(|s| s == x).unwrap();
                values[idx].clone()
            })
            .collect())
    }

    /// `H(x) = v0(x)* H0 v0(x)`
    pub fn hamiltonian(&self, x: f64) -> Result<CMat> {
        let v0 = self.v0(x)?;
        Ok(hermitize(&(v0.adjoint() * &self.h0 * v0)))
    }

    pub fn hamiltonian_path(&self, xs: &[f64]) -> Result<Vec<CMat>> {
        Ok(self
            .v0_path(xs)?
            .into_iter()
            .map(|v0| hermitize(&(v0.adjoint() * &self.h0 * v0)))
            .collect())
    }

    /// Fundamental solution of the initial system, `w0(x, z) = Z e^{izxD̆} Z⁻¹`.
    pub fn free_fundamental(&self, x: f64, z: Complex64) -> CMat {
        let p = self.params.p;
        let mut e = identity(2 * p);
        for k in 0..p {
            e[(k, k)] = (I * z * x * self.params.d[k]).exp();
        }
        self.params.z_matrix() * e * self.params.z_inverse()
    }

    /// `w(x, z) = v0(x)⁻¹ w_α(x, z) w0(x, z) w_α(0, z)⁻¹ v0(0)` with `v0(0) = I`.
    pub fn fundamental(&self, x: f64, z: Complex64) -> Result<CMat> {
        let state_x = self.state(x)?;
        let state_0 = self.state(0.0)?;
        let wa_x = self.transfer_from_state(&state_x, z)?;
        let wa_0 = self.transfer_from_state(&state_0, z)?;
        let wa_0_inv = inverse(&wa_0).map_err(|_| Error::Singular {
            what: "w_alpha(0, z) is not invertible".into(),
            z,
        })?;
        let v0_inv = inverse(&self.v0(x)?)?;
        Ok(v0_inv * wa_x * self.free_fundamental(x, z) * wa_0_inv)
    }

    /// The pair of rational Weyl functions `φ`, `φ̂` with their realizations.
    pub fn weyl_pair(&self) -> WeylPair {
        let prm = &self.params;
        let p = prm.p;
        let abs_d = prm.abs_d();
        let abs_d_m = diag_real(&abs_d);
        let gamma = &prm.alpha - &self.psi2 * prm.lambda2_0.adjoint() * I;
        let psi1_hat = &prm.lambda1_0 - &prm.lambda2_0 * &abs_d_m * c64(0.5, 0.0);
        let psi2_hat = &prm.lambda1_0 + &prm.lambda2_0 * &abs_d_m * c64(0.5, 0.0);
        let gamma_hat = &prm.alpha - &psi2_hat * prm.lambda2_0.adjoint() * I;
        let mut p1 = vec![0.0; p];
        let mut p2 = vec![0.0; p];
        for k in 0..p {
            if prm.d[k] > 0.0 {
                p1[k] = 1.0;
            } else {
                p2[k] = 1.0;
            }
        }
        WeylPair {
            d: prm.d.clone(),
            gamma,
            psi1_0: self.psi1_0.clone(),
            psi2: self.psi2.clone(),
            gamma_hat,
            psi1_hat,
            psi2_hat,
            p1,
            p2,
            scale: self.alpha_scale,
        }
    }
}

/// Realization data of the two Weyl functions
/// `φ(z) = −(i/2)D + Ψ1(0)*(γ − z)⁻¹Ψ2` and
/// `φ̂(z) = (i/2)|D| + Ψ̂1(0)*(γ̂ − z)⁻¹Ψ̂2`.
#[derive(Debug, Clone)]
pub struct WeylPair {
    pub d: Vec<f64>,
    pub gamma: CMat,
    pub psi1_0: CMat,
    pub psi2: CMat,
    pub gamma_hat: CMat,
    pub psi1_hat: CMat,
    pub psi2_hat: CMat,
    /// Diagonals of the projectors onto the positive / negative entries of `D`.
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    scale: f64,
}

/// Residuals of the two identities satisfied by `γ` and `γ̂`.
#[derive(Debug, Clone, Copy)]
pub struct GammaIdentities {
    pub gamma: f64,
    pub gamma_hat: f64,
}

impl WeylPair {
    fn eval_realization(
        &self,
        constant: CMat,
        gamma: &CMat,
        left: &CMat,
        right: &CMat,
        z: Complex64,
    ) -> Result<CMat> {
        let n = gamma.nrows();
        let eigs = eigenvalues(gamma);
        let dist = eigs.iter().map(|l| (l - z).norm()).fold(f64::INFINITY, f64::min);
        if dist < POLE_TOL * self.scale {
            return Err(Error::Singular { what: "z is a pole of the realization".into(), z });
        }
        let shifted = gamma - identity(n) * z;
        let r = solve(&shifted, right).map_err(|_| Error::Singular { what: "gamma - z I is singular".into(), z })?;
        Ok(constant + left.adjoint() * r)
    }

    pub fn phi(&self, z: Complex64) -> Result<CMat> {
        let constant = diag_real(&self.d) * c64(0.0, -0.5);
        self.eval_realization(constant, &self.gamma, &self.psi1_0, &self.psi2, z)
    }

    pub fn phi_hat(&self, z: Complex64) -> Result<CMat> {
        let abs_d: Vec<f64> = self.d.iter().map(|v| v.abs()).collect();
        let constant = diag_real(&abs_d) * c64(0.0, 0.5);
        self.eval_realization(constant, &self.gamma_hat, &self.psi1_hat, &self.psi2_hat, z)
    }

    /// `(φ(z), φ̂(z))`
    pub fn sample(&self, z: Complex64) -> Result<(CMat, CMat)> {
        Ok((self.phi(z)?, self.phi_hat(z)?))
    }

    /// Relative residuals of `γ − γ* = iΛ2(0)DΛ2(0)*` and
    /// `γ̂* − γ̂ = i(Ψ̂2 − Ψ̂1(0))|D|⁻¹(Ψ̂2 − Ψ̂1(0))*`.
    pub fn identity_residuals(&self, lambda2_0: &CMat) -> GammaIdentities {
        let d = diag_real(&self.d);
        let lhs = &self.gamma - self.gamma.adjoint();
        let rhs = lambda2_0 * d * lambda2_0.adjoint() * I;
        let gamma = crate::linalg::fro(&(lhs - rhs)) / (1.0 + crate::linalg::fro(&self.gamma));
        let inv_abs: Vec<f64> = self.d.iter().map(|v| 1.0 / v.abs()).collect();
        let diff = &self.psi2_hat - &self.psi1_hat;
        let lhs_hat = self.gamma_hat.adjoint() - &self.gamma_hat;
        let rhs_hat = &diff * diag_real(&inv_abs) * diff.adjoint() * I;
        let gamma_hat =
            crate::linalg::fro(&(lhs_hat - rhs_hat)) / (1.0 + crate::linalg::fro(&self.gamma_hat));
        GammaIdentities { gamma, gamma_hat }
    }

    pub fn projectors(&self) -> (CMat, CMat) {
        (diag_real(&self.p1), diag_real(&self.p2))
    }

    /// Largest imaginary part over the spectrum of `γ`.
    pub fn max_im_gamma_eigenvalue(&self) -> f64 {
        eigenvalues(&self.gamma).iter().map(|l| l.im).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Residual of `αΣ(x) − Σ(x)α* = iΛ(x)JΛ(x)*`, relative to `‖α‖‖Σ‖ + 1`.
pub fn state_identity_residual(params: &GbdtParams, state: &GbdtState) -> f64 {
    let lhs = &params.alpha * &state.sigma - &state.sigma * params.alpha.adjoint();
    let rhs = &state.lambda * j_matrix(params.p) * state.lambda.adjoint() * I;
    let scale = crate::linalg::fro(&params.alpha) * crate::linalg::fro(&state.sigma) + 1.0;
    crate::linalg::fro(&(lhs - rhs)) / scale
}

/// Residual of `w(x, z̄)* J w(x, z) = J`.
pub fn j_unitarity_residual(w_z: &CMat, w_zbar: &CMat) -> f64 {
    let p = w_z.nrows() / 2;
    let j = j_matrix(p);
    let r = w_zbar.adjoint() * &j * w_z - &j;
    crate::linalg::fro(&r) / (1.0 + crate::linalg::fro(w_z) * crate::linalg::fro(w_zbar))
}
