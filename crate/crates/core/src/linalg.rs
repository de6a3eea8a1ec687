//! Dense complex linear algebra helpers shared by the solvers.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Only a handful of routines are
//! hand-written: the Cholesky factorization (so that a failure can name the
//! offending leading minor) and the small Kronecker-form Sylvester solver.

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

/// Real diagonal matrix as a complex matrix.
pub fn diag_real(d: &[f64]) -> CMat {
    let mut m = zeros(d.len(), d.len());
    for (k, &v) in d.iter().enumerate() {
        m[(k, k)] = c64(v, 0.0);
    }
    m
}

/// The block anti-diagonal `J = [[0, I_p], [I_p, 0]]`.
pub fn j_matrix(p: usize) -> CMat {
    let mut j = zeros(2 * p, 2 * p);
    for k in 0..p {
        j[(k, p + k)] = ONE;
        j[(p + k, k)] = ONE;
    }
    j
}

/// The block diagonal `j = diag(I_p, -I_p)` of the Dirac system.
pub fn j_sign(p: usize) -> CMat {
    let mut j = zeros(2 * p, 2 * p);
    for k in 0..p {
        j[(k, k)] = ONE;
        j[(p + k, p + k)] = -ONE;
    }
    j
}

/// `[a b]`
pub fn hstack(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.nrows(), b.nrows());
    let mut m = zeros(a.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    m
}

/// `[a; b]`
pub fn vstack(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.ncols());
    let mut m = zeros(a.nrows() + b.nrows(), a.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    m
}

pub fn block(m: &CMat, row: usize, col: usize, rows: usize, cols: usize) -> CMat {
    m.view((row, col), (rows, cols)).into_owned()
}

pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()) * c64(0.5, 0.0)
}

/// Imaginary part in the matrix sense, `(m - m*) / 2i`.
pub fn im_part(m: &CMat) -> CMat {
    (m - m.adjoint()) * c64(0.0, -0.5)
}

/// Real part in the matrix sense, `(m + m*) / 2`.
pub fn re_part(m: &CMat) -> CMat {
    hermitize(m)
}

pub fn fro(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn scale(m: &CMat, s: Complex64) -> CMat {
    m * s
}

/// Inverse by LU; fails on exact or numerical singularity.
pub fn inverse(m: &CMat) -> Result<CMat> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "cannot invert a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let lu = m.clone().lu();
    let inv = lu
        .try_inverse()
        .ok_or_else(|| Error::Validation("matrix is singular".into()))?;
    if inv.iter().any(|z| !z.is_finite()) {
        return Err(Error::Validation("matrix is numerically singular".into()));
    }
    Ok(inv)
}

/// Solves `a x = b` by LU.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    let x = a
        .clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Validation("matrix is singular".into()))?;
    if x.iter().any(|z| !z.is_finite()) {
        return Err(Error::Validation("matrix is numerically singular".into()));
    }
    Ok(x)
}

pub fn expm(m: &CMat) -> CMat {
    m.exp()
}

/// Cholesky factor `L` (lower, positive real diagonal) with `a = L L*`.
///
/// On failure returns the size of the first leading principal minor that is
/// not positive.
pub fn cholesky_lower(a: &CMat) -> std::result::Result<CMat, usize> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let mut l = a.clone();
    for j in 0..n {
        let d = l[(j, j)].re;
        if !(d > 0.0) || !d.is_finite() {
            return Err(j + 1);
        }
        let ljj = d.sqrt();
        l[(j, j)] = c64(ljj, 0.0);
        for i in j + 1..n {
            l[(i, j)] /= ljj;
        }
        // Right-looking update of the trailing lower triangle, column by column.
        for c in j + 1..n {
            let f = l[(c, j)].conj();
            if f == ZERO {
                continue;
            }
            let (left, mut right) = l.columns_range_pair_mut(j, c);
            let src = left.rows_range(c..n);
            let mut dst = right.rows_range_mut(c..n);
            for (t, s) in dst.iter_mut().zip(src.iter()) {
                *t -= *s * f;
            }
        }
    }
    for j in 0..n {
        for i in 0..j {
            l[(i, j)] = ZERO;
        }
    }
    Ok(l)
}

/// Eigenvalues of a general complex square matrix via the Schur form.
pub fn eigenvalues(m: &CMat) -> Vec<Complex64> {
    let n = m.nrows();
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![m[(0, 0)]];
    }
    let schur = Schur::try_new(m.clone(), 1e-15, 10_000)
        .unwrap_or_else(|| Schur::new(m.clone()));
    let (_, t) = schur.unpack();
    (0..n).map(|k| t[(k, k)]).collect()
}

/// Eigenvalues of a Hermitian matrix (the input is Hermitized first).
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 {
        return vec![];
    }
    let e = SymmetricEigen::new(hermitize(m));
    let mut v: Vec<f64> = e.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(0.0)
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// Numerical rank with relative cutoff `tol * sigma_max`.
pub fn rank(m: &CMat, tol: f64) -> usize {
    let s = singular_values(m);
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol * smax).count()
}

/// Spectral norm (largest singular value).
pub fn norm2(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Solves `a x - x b = c` through the Kronecker form. Intended for the small
/// state dimensions used by the explicit formulas.
pub fn sylvester(a: &CMat, b: &CMat, c: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let m = b.nrows();
    if c.nrows() != n || c.ncols() != m {
        return Err(Error::Dimension("sylvester right-hand side".into()));
    }
    let op = sylvester_operator(a, b);
    let rhs = CMat::from_column_slice(n * m, 1, c.as_slice());
    let x = solve(&op, &rhs)?;
    Ok(CMat::from_column_slice(n, m, x.as_slice()))
}

/// Matrix of `x -> a x - x b` acting on column-major `vec(x)`.
pub fn sylvester_operator(a: &CMat, b: &CMat) -> CMat {
    let n = a.nrows();
    let m = b.nrows();
    let mut op = zeros(n * m, n * m);
    for col in 0..m {
        for i in 0..n {
            for k in 0..n {
                op[(col * n + i, col * n + k)] += a[(i, k)];
            }
        }
        for j in 0..m {
            let bjc = b[(j, col)];
            if bjc == ZERO {
                continue;
            }
            for i in 0..n {
                op[(col * n + i, j * n + i)] -= bjc;
            }
        }
    }
    op
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CMat {
        CMat::from_row_slice(
            3,
            3,
            &[
                c64(1.0, 0.5),
                c64(0.2, -0.1),
                c64(0.0, 0.3),
                c64(-0.4, 0.0),
                c64(2.0, 1.0),
                c64(0.1, 0.1),
                c64(0.3, 0.2),
                c64(0.0, -0.7),
                c64(-1.0, 0.2),
            ],
        )
    }

    #[test]
    fn cholesky_reproduces_matrix() {
        let a = sample();
        let spd = &a * a.adjoint() + identity(3);
        let l = cholesky_lower(&spd).unwrap();
        assert!(fro(&(&l * l.adjoint() - &spd)) < 1e-12);
        for i in 0..3 {
            assert!(l[(i, i)].im == 0.0 && l[(i, i)].re > 0.0);
        }
    }

    #[test]
    fn cholesky_reports_failing_minor() {
        let mut m = identity(4);
        m[(2, 2)] = c64(-1.0, 0.0);
        assert_eq!(cholesky_lower(&m).unwrap_err(), 3);
    }

    #[test]
    fn expm_matches_eigendecomposition_on_normal_matrix() {
        // Hermitian plus a multiple of the identity is normal.
        let a = sample();
        let h = hermitize(&a) + identity(3) * c64(0.0, 0.7);
        let e = SymmetricEigen::new(hermitize(&a));
        let u = e.eigenvectors.clone();
        let mut d = zeros(3, 3);
        for k in 0..3 {
            d[(k, k)] = (c64(e.eigenvalues[k], 0.7)).exp();
        }
        let reference = &u * d * u.adjoint();
        assert!(fro(&(expm(&h) - reference)) < 1e-12);
    }

    #[test]
    fn sylvester_solves_alpha_adjoint_form() {
        let a = sample();
        let b = a.adjoint() + identity(3) * c64(0.0, -1.0);
        let c = hermitize(&sample());
        let x = sylvester(&a, &b, &c).unwrap();
        assert!(fro(&(&a * &x - &x * &b - &c)) < 1e-12);
    }

    #[test]
    fn eigenvalues_of_triangular() {
        let mut m = zeros(3, 3);
        m[(0, 0)] = c64(1.0, 1.0);
        m[(1, 1)] = c64(-2.0, 0.0);
        m[(2, 2)] = c64(0.0, -3.0);
        m[(0, 2)] = c64(5.0, 0.0);
        let mut ev = eigenvalues(&m);
        ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((ev[0] - c64(-2.0, 0.0)).norm() < 1e-12);
        assert!((ev[1] - c64(0.0, -3.0)).norm() < 1e-12);
        assert!((ev[2] - c64(1.0, 1.0)).norm() < 1e-12);
    }
}
