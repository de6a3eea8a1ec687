//! Canonical systems generated by a `|D|`-difference kernel.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{DifferenceKernel, GridFunction};
use crate::linalg::{c64, diag_real, hstack, identity, j_matrix, solve, zeros, CMat, I};

use super::operator::{build_structured_operator, factorize_triangular, split_blocks, stack_blocks, TriangularFactor};

/// `s(u) = ½I + |D|⁻¹ ∫_0^u k`.
pub struct CanonicalAmplitude {
    prim: crate::grid::KernelPrimitive,
    inv_abs_d: CMat,
    p: usize,
}

impl CanonicalAmplitude {
    pub fn new(k: &DifferenceKernel, d: &[f64]) -> Self {
        let inv_abs_d = diag_real(&d.iter().map(|v| 1.0 / v.abs()).collect::<Vec<_>>());
        Self { prim: k.primitive(), inv_abs_d, p: k.p }
    }

    pub fn eval(&self, u: f64) -> CMat {
        identity(self.p) * c64(0.5, 0.0) + &self.inv_abs_d * self.prim.eval(u)
    }

    /// `Π(x) = [D{s_ij(|d_i| x)}  I]`: row `i` of the left block is row `i` of
    /// `d_i s(|d_i| x)`.
    pub fn pi(&self, d: &[f64], x: f64) -> CMat {
        let p = self.p;
        let mut left = zeros(p, p);
        for (i, &di) in d.iter().enumerate() {
            let s = self.eval(di.abs() * x);
            for j in 0..p {
                left[(i, j)] = s[(i, j)] * di;
            }
        }
        hstack(&left, &identity(p))
    }
}

fn check_d(k: &DifferenceKernel, d: &[f64]) -> Result<()> {
    if d.len() != k.p {
        return Err(Error::Dimension(format!("D has {} entries, kernel is {}x{}", d.len(), k.p, k.p)));
    }
    if let Some(v) = d.iter().find(|&&v| !(v < 0.0)) {
        return Err(Error::Domain(format!("canonical systems from kernels need D < 0, found {v}")));
    }
    Ok(())
}

/// `Π(x_i)` on the midpoint grid.
pub fn pi_on_grid(k: &DifferenceKernel, d: &[f64], m: usize) -> Vec<CMat> {
    let amp = CanonicalAmplitude::new(k, d);
    (0..m).map(|i| amp.pi(d, (i as f64 + 0.5) * k.h)).collect()
}

/// `β = (I + E)Π` and `H = β*β` on the midpoint grid of `[0, l]`.
#[derive(Debug, Clone)]
pub struct CanonicalData {
    pub beta: GridFunction,
    pub hamiltonian: GridFunction,
    pub factor: TriangularFactor,
    /// `‖W S W* − I‖_F`
    pub factor_residual: f64,
}

pub fn canonical_from_kernel(k: &DifferenceKernel, d: &[f64], l: f64) -> Result<CanonicalData> {
    check_d(k, d)?;
    let op = build_structured_operator(k, l, Some(d))?;
    let factor = factorize_triangular(&op)?;
    let factor_residual = factor.residual(&op);
    let (p, h, m) = (k.p, k.h, op.m);
    let pi = pi_on_grid(k, d, m);
    let beta = split_blocks(&(&factor.w * stack_blocks(&pi)), p);
    let ham: Vec<CMat> = beta.iter().map(|b| b.adjoint() * b).collect();
    let x0 = 0.5 * h;
    Ok(CanonicalData {
        beta: GridFunction { rows: p, cols: 2 * p, x0, h, values: beta },
        hamiltonian: GridFunction { rows: 2 * p, cols: 2 * p, x0, h, values: ham },
        factor,
        factor_residual,
    })
}

/// `B(j) = Π_j* S_j⁻¹ Π_j` on `[0, j h]`, each by an independent dense solve.
pub fn b_matrix(k: &DifferenceKernel, d: &[f64], j: usize) -> Result<CMat> {
    check_d(k, d)?;
    let l = j as f64 * k.h;
    let op = build_structured_operator(k, l, Some(d))?;
    let pi = stack_blocks(&pi_on_grid(k, d, j));
    let x = solve(&op.s, &pi)?;
    Ok(pi.adjoint() * x * c64(k.h, 0.0))
}

/// `H(j h) ≈ (B(j + 1) − B(j − 1)) / 2h`, the Hamiltonian as the derivative of
/// `B(l)` in `l`.
pub fn hamiltonian_by_dbdl(k: &DifferenceKernel, d: &[f64], j: usize) -> Result<CMat> {
    if j == 0 {
        return Err(Error::Domain("central difference needs j ≥ 1".into()));
    }
    let plus = b_matrix(k, d, j + 1)?;
    let minus = if j >= 2 { b_matrix(k, d, j - 1)? } else { zeros(plus.nrows(), plus.ncols()) };
    Ok((plus - minus) * c64(0.5 / k.h, 0.0))
}

/// `w(l, z) = I + izJΠ*S_l⁻¹(I − zA)⁻¹Π`, `(Af)(x) = iD∫_0^x f`.
pub fn fundamental_from_kernel(k: &DifferenceKernel, d: &[f64], l: f64, z: Complex64) -> Result<CMat> {
    check_d(k, d)?;
    let op = build_structured_operator(k, l, Some(d))?;
    let factor = factorize_triangular(&op)?;
    Ok(fundamental_from_factor(k, d, &factor, z))
}

pub fn fundamental_from_factor(k: &DifferenceKernel, d: &[f64], factor: &TriangularFactor, z: Complex64) -> CMat {
    let (p, h, m) = (k.p, k.h, factor.m);
    let pi = pi_on_grid(k, d, m);
    let dm = diag_real(d);
    // Midpoint discretization of A: (Af)_i = iD(h Σ_{j<i} f_j + (h/2) f_i).
    let lhs = identity(p) - &dm * (I * z * (0.5 * h));
    let lhs_inv = crate::linalg::inverse(&lhs).expect("I − (izh/2)D is diagonal and nonsingular");
    let mut y: Vec<CMat> = Vec::with_capacity(m);
    let mut running = zeros(p, 2 * p);
    for pi_i in &pi {
        let yi = &lhs_inv * (pi_i + &dm * &running * (I * z * h));
        running += &yi;
        y.push(yi);
    }
    let u = split_blocks(&factor.solve(&stack_blocks(&y)), p);
    let mut acc = zeros(2 * p, 2 * p);
    for (pi_i, ui) in pi.iter().zip(&u) {
        acc += pi_i.adjoint() * ui;
    }
    identity(2 * p) + j_matrix(p) * acc * (I * z * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm, fro};

    #[test]
    fn zero_kernel_gives_constant_hamiltonian() {
        let k = DifferenceKernel::zero(1, 0.125, 8);
        let data = canonical_from_kernel(&k, &[-1.0], 1.0).unwrap();
        let pi = CMat::from_row_slice(1, 2, &[c64(-0.5, 0.0), c64(1.0, 0.0)]);
        for (b, hm) in data.beta.values.iter().zip(&data.hamiltonian.values) {
            assert_eq!(b, &pi);
            assert_eq!(hm, &(pi.adjoint() * &pi));
        }
    }

    #[test]
    fn fundamental_at_zero_and_free_case() {
        let k = DifferenceKernel::zero(1, 1.0 / 256.0, 128);
        let w0 = fundamental_from_kernel(&k, &[-1.0], 0.5, c64(0.0, 0.0)).unwrap();
        assert_eq!(w0, identity(2));
        let z = c64(0.7, 0.4);
        let w = fundamental_from_kernel(&k, &[-1.0], 0.5, z).unwrap();
        let pi = CMat::from_row_slice(1, 2, &[c64(-0.5, 0.0), c64(1.0, 0.0)]);
        let exact = expm(&(j_matrix(1) * pi.adjoint() * &pi * (I * z * 0.5)));
        assert!(fro(&(w - exact)) < 1e-5);
    }

    #[test]
    fn positive_d_is_rejected() {
        let k = DifferenceKernel::zero(1, 0.125, 8);
        assert!(matches!(canonical_from_kernel(&k, &[1.0], 1.0), Err(Error::Domain(_))));
    }
}
