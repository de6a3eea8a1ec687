//! Nyström discretization of `S_l = I + ∫_0^l k(·)` and its triangular
//! factorization.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::DifferenceKernel;
use crate::linalg::{c64, cholesky_lower, fro, identity, CMat, ZERO};
use crate::quad::gauss_legendre;

/// Dense discretization of a structured operator on the midpoint grid
/// `x_i = (i + ½)h`, `i < m`, with point-major block ordering: row `i p + a`
/// belongs to grid point `i`, component `a`.
#[derive(Debug, Clone)]
pub struct StructuredOperator {
    pub p: usize,
    pub h: f64,
    pub m: usize,
    /// `None` for a plain difference kernel, otherwise the (negative)
    /// diagonal of `D`.
    pub d: Option<Vec<f64>>,
    pub s: CMat,
}

impl StructuredOperator {
    pub fn l(&self) -> f64 {
        self.m as f64 * self.h
    }

    pub fn dim(&self) -> usize {
        self.m * self.p
    }

    /// The operator on `[0, j h]`, which is the leading `j p` block.
    pub fn leading(&self, j: usize) -> CMat {
        let n = j * self.p;
        self.s.view((0, 0), (n, n)).into_owned()
    }
}

/// Number of grid cells in `[0, l]`; `h` must divide `l`.
pub fn grid_size(l: f64, h: f64) -> Result<usize> {
    if !(l > 0.0) || !(h > 0.0) {
        return Err(Error::Dimension(format!("need l > 0 and h > 0 (l = {l}, h = {h})")));
    }
    let m = (l / h).round();
    if (m * h - l).abs() > 1e-9 * l || m < 1.0 {
        return Err(Error::Dimension(format!("grid step {h} does not divide l = {l}")));
    }
    Ok(m as usize)
}

/// Builds `S = I + h [kernel(x_i, x_j)]`.
///
/// Without `d` the kernel is `k(x − t)`; the value at a grid difference `(i − j)h`
/// is the mean of the two neighbouring midpoint samples, which on the diagonal
/// is the Hermitian mean across the jump at the origin. With `d` the entry
/// `(a, b)` is `k_ab(|d_a| x − |d_b| t)`, averaged over the cell pair with a
/// 3×3 Gauss rule.
pub fn build_structured_operator(k: &DifferenceKernel, l: f64, d: Option<&[f64]>) -> Result<StructuredOperator> {
    let m = grid_size(l, k.h)?;
    let p = k.p;
    let h = k.h;
    let s = match d {
        None => {
            if k.len() < m {
                return Err(Error::Dimension(format!("kernel covers {} cells, operator needs {m}", k.len())));
            }
            plain_matrix(k, m)
        }
        Some(d) => {
            if d.len() != p {
                return Err(Error::Dimension(format!("D has {} entries, kernel is {p}x{p}", d.len())));
            }
            if let Some(v) = d.iter().find(|&&v| !(v < 0.0)) {
                return Err(Error::Domain(format!("weighted operators need D < 0, found {v}")));
            }
            let dmax = d.iter().map(|v| v.abs()).fold(0.0, f64::max);
            if dmax * l > k.extent() * (1.0 + 1e-12) {
                return Err(Error::Dimension(format!(
                    "kernel covers [0, {}], operator needs [0, {}]",
                    k.extent(),
                    dmax * l
                )));
            }
            weighted_matrix(k, m, d)
        }
    };
    Ok(StructuredOperator { p, h, m, d: d.map(|v| v.to_vec()), s })
}

fn plain_matrix(k: &DifferenceKernel, m: usize) -> CMat {
    let p = k.p;
    let h = k.h;
    // B(δ) = h · ½(k_mid(δ − 1) + k_mid(δ)) for δ = i − j ≥ 0.
    let blocks: Vec<CMat> = (0..m as isize)
        .map(|delta| (k.at_midpoint(delta - 1) + k.at_midpoint(delta)) * c64(0.5 * h, 0.0))
        .collect();
    let mut s = identity(m * p);
    for i in 0..m {
        for j in 0..=i {
            let b = &blocks[i - j];
            for a in 0..p {
                for c in 0..p {
                    s[(i * p + a, j * p + c)] += b[(a, c)];
                    if i != j {
                        s[(j * p + c, i * p + a)] += b[(a, c)].conj();
                    }
                }
            }
        }
    }
    s
}

fn weighted_matrix(k: &DifferenceKernel, m: usize, d: &[f64]) -> CMat {
    let p = k.p;
    let h = k.h;
    let n = m * p;
    let (nodes, weights) = gauss_legendre(3);
    let offsets: Vec<(f64, f64)> = nodes.iter().zip(&weights).map(|(t, w)| (0.5 * h * t, 0.5 * w)).collect();
    let abs_d: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    // Lower triangle (in the flattened index) row by row, then mirrored.
    let rows: Vec<Vec<num_complex::Complex64>> = (0..n)
        .into_par_iter()
        .map(|r| {
            let (i, a) = (r / p, r % p);
            let xi = (i as f64 + 0.5) * h;
            (0..=r)
                .map(|c| {
                    let (j, b) = (c / p, c % p);
                    let tj = (j as f64 + 0.5) * h;
                    let mut acc = ZERO;
                    for &(dx, wx) in &offsets {
                        for &(dt, wt) in &offsets {
                            let u = abs_d[a] * (xi + dx) - abs_d[b] * (tj + dt);
                            acc += k.eval_entry(u, a, b) * (wx * wt);
                        }
                    }
                    acc * h
                })
                .collect()
        })
        .collect();
    let mut s = identity(n);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if r == c {
                s[(r, r)] += c64(v.re, 0.0);
            } else {
                s[(r, c)] += v;
                s[(c, r)] += v.conj();
            }
        }
    }
    s
}

/// `W = I + E` with `W S W* = I`, `W` block lower triangular, together with
/// its inverse `L = I + Γ`. `S = L L*` is the Cholesky factorization.
#[derive(Debug, Clone)]
pub struct TriangularFactor {
    pub p: usize,
    pub h: f64,
    pub m: usize,
    /// Cholesky factor `L` of `S`.
    pub chol: CMat,
    /// `W = L⁻¹`.
    pub w: CMat,
}

/// Cholesky factorization of `S`; failure names the first leading minor
/// that is not positive, so this doubles as the positivity test.
pub fn factorize_triangular(op: &StructuredOperator) -> Result<TriangularFactor> {
    let chol = cholesky_lower(&op.s).map_err(|minor| Error::NotPositive { minor })?;
    let n = op.dim();
    let w = chol
        .solve_lower_triangular(&identity(n))
        .ok_or_else(|| Error::Validation("triangular inversion failed".into()))?;
    Ok(TriangularFactor { p: op.p, h: op.h, m: op.m, chol, w })
}

impl TriangularFactor {
    fn block(m: &CMat, p: usize, i: usize, j: usize) -> CMat {
        m.view((i * p, j * p), (p, p)).into_owned()
    }

    /// `E(x_i, x_j)` for `i > j`, zero otherwise.
    pub fn e_kernel(&self, i: usize, j: usize) -> CMat {
        if i > j {
            Self::block(&self.w, self.p, i, j) * c64(1.0 / self.h, 0.0)
        } else {
            CMat::zeros(self.p, self.p)
        }
    }

    /// `Γ(x_i, x_j)` for `i > j`, zero otherwise.
    pub fn gamma_kernel(&self, i: usize, j: usize) -> CMat {
        if i > j {
            Self::block(&self.chol, self.p, i, j) * c64(1.0 / self.h, 0.0)
        } else {
            CMat::zeros(self.p, self.p)
        }
    }

    /// `‖W S W* − I‖_F`, an upper bound for the spectral-norm residual.
    pub fn residual(&self, op: &StructuredOperator) -> f64 {
        let n = op.dim();
        fro(&(&self.w * &op.s * self.w.adjoint() - identity(n)))
    }

    /// `‖W L − I‖_F`
    pub fn inverse_pair_residual(&self) -> f64 {
        fro(&(&self.w * &self.chol - identity(self.w.nrows())))
    }

    /// Solves `S x = b` with the stored factorization.
    pub fn solve(&self, b: &CMat) -> CMat {
        let y = self.chol.solve_lower_triangular(b).expect("nonsingular factor");
        self.chol.adjoint().solve_upper_triangular(&y).expect("nonsingular factor")
    }
}

/// Stacks `p × c` blocks into an `(m p) × c` block column.
pub fn stack_blocks(blocks: &[CMat]) -> CMat {
    let (p, c) = blocks.first().map_or((0, 0), |b| b.shape());
    let mut out = CMat::zeros(blocks.len() * p, c);
    for (i, b) in blocks.iter().enumerate() {
        out.view_mut((i * p, 0), (p, c)).copy_from(b);
    }
    out
}

/// Inverse of [`stack_blocks`].
pub fn split_blocks(v: &CMat, p: usize) -> Vec<CMat> {
    (0..v.nrows() / p).map(|i| v.view((i * p, 0), (p, v.ncols())).into_owned()).collect()
}
