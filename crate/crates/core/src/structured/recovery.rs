//! Dirac-system data recovered from a plain difference kernel: the potential,
//! the pair `θ1`, `θ2`, and the accelerant of a given potential.

use crate::error::{Error, Result};
use crate::grid::{DifferenceKernel, GridFunction};
use crate::linalg::{c64, hstack, identity, solve, CMat, I};

use super::operator::{build_structured_operator, factorize_triangular, split_blocks, stack_blocks, TriangularFactor};

/// How the potential is read off the factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialMode {
    /// `v(x/2) = 2i(k(x) + ∫_0^x E(x,t)k(t)dt)` at every grid point.
    Endpoint,
    /// `v(x) = −2iE(2x, 0)`, which needs a continuous potential.
    KernelEdge,
}

/// Potential on the grid `x_i / 2 = (i + ½)h/2` of `(0, l/2)`.
pub fn recover_potential(k: &DifferenceKernel, l: f64, mode: PotentialMode) -> Result<GridFunction> {
    let op = build_structured_operator(k, l, None)?;
    let f = factorize_triangular(&op)?;
    Ok(potential_from_factor(&f, k, mode))
}

pub fn potential_from_factor(f: &TriangularFactor, k: &DifferenceKernel, mode: PotentialMode) -> GridFunction {
    let (p, h, m) = (f.p, f.h, f.m);
    let values = match mode {
        PotentialMode::Endpoint => {
            let wk = &f.w * stack_blocks(&k.samples[..m]);
            split_blocks(&wk, p).into_iter().map(|b| b * c64(0.0, 2.0)).collect()
        }
        PotentialMode::KernelEdge => {
            let mut v: Vec<CMat> = (0..m).map(|i| f.e_kernel(i, 0) * c64(0.0, -2.0)).collect();
            // The first point has no strictly lower block; extrapolate linearly.
            if m >= 3 {
                v[0] = &v[1] * c64(2.0, 0.0) - &v[2];
            }
            v
        }
    };
    GridFunction { rows: p, cols: p, x0: 0.25 * h, h: 0.5 * h, values }
}

/// `v(l/2) = 2i (S_l⁻¹ k)(l)` by a dense solve, independent of the
/// triangular factor. The value refers to the last grid point `x_{m−1}/2`.
pub fn potential_right_edge(k: &DifferenceKernel, l: f64) -> Result<CMat> {
    let op = build_structured_operator(k, l, None)?;
    let y = solve(&op.s, &stack_blocks(&k.samples[..op.m]))?;
    Ok(split_blocks(&y, op.p).pop().unwrap() * c64(0.0, 2.0))
}

/// `s(x_i) = ½I + ∫_0^{x_i} k` on the midpoint grid.
pub fn amplitude_on_grid(k: &DifferenceKernel, m: usize) -> Vec<CMat> {
    let prim = k.primitive();
    let half = identity(k.p) * c64(0.5, 0.0);
    (0..m).map(|i| &half + prim.eval((i as f64 + 0.5) * k.h)).collect()
}

/// `θ1(x/2)`, `θ2(x/2)` on the grid `x_i / 2`.
///
/// `θ1(x/2) = (1/√2)((I + E)[2s  I])(x)`, and `θ2` is the running integral
/// `(1/√2)([−I  I] − ∫_0^x ((I+E)k)*(t) ((I+E)[2s  I])(t) dt)`.
pub fn theta_functions(k: &DifferenceKernel, l: f64) -> Result<(GridFunction, GridFunction)> {
    let op = build_structured_operator(k, l, None)?;
    let f = factorize_triangular(&op)?;
    Ok(theta_from_factor(&f, k))
}

pub fn theta_from_factor(f: &TriangularFactor, k: &DifferenceKernel) -> (GridFunction, GridFunction) {
    let (p, h, m) = (f.p, f.h, f.m);
    let inv_sqrt2 = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let eye = identity(p);
    let g: Vec<CMat> = amplitude_on_grid(k, m).iter().map(|s| hstack(&(s * c64(2.0, 0.0)), &eye)).collect();
    let wg = split_blocks(&(&f.w * stack_blocks(&g)), p);
    let wk = split_blocks(&(&f.w * stack_blocks(&k.samples[..m])), p);
    let theta1: Vec<CMat> = wg.iter().map(|b| b * inv_sqrt2).collect();
    let mut acc = hstack(&(-eye.clone()), &eye);
    let mut theta2 = Vec::with_capacity(m);
    for i in 0..m {
        let term = wk[i].adjoint() * &wg[i] * c64(h, 0.0);
        theta2.push((&acc - &term * c64(0.5, 0.0)) * inv_sqrt2);
        acc -= term;
    }
    let x0 = 0.25 * h;
    (
        GridFunction { rows: p, cols: 2 * p, x0, h: 0.5 * h, values: theta1 },
        GridFunction { rows: p, cols: 2 * p, x0, h: 0.5 * h, values: theta2 },
    )
}

/// `k(2x) = −(i/2)(v(x) + 2∫_0^x Γ(2x, 2t) v(t) dt)` on the kernel grid, which
/// inverts [`PotentialMode::Endpoint`] exactly at the discrete level.
pub fn accelerant_from_potential(v: &GridFunction, f: &TriangularFactor) -> Result<DifferenceKernel> {
    let (p, h, m) = (f.p, f.h, f.m);
    let same = v.len() == m
        && v.rows == p
        && v.cols == p
        && (v.h - 0.5 * h).abs() <= 1e-12 * h
        && (v.x0 - 0.25 * h).abs() <= 1e-12 * h;
    if !same {
        return Err(Error::Dimension(format!(
            "potential grid (x0 = {}, h = {}, {} points) does not match the factor grid (x0 = {}, h = {}, {m} points)",
            v.x0,
            v.h,
            v.len(),
            0.25 * h,
            0.5 * h
        )));
    }
    let lv = &f.chol * stack_blocks(&v.values);
    let samples = split_blocks(&lv, p).into_iter().map(|b| b * (I * -0.5)).collect();
    DifferenceKernel::new(p, h, samples)
}
