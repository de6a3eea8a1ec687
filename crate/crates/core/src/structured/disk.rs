//! Weyl disks of a canonical system on a finite interval.
//!
//! The fundamental solution is propagated cell by cell with a fourth-order
//! Magnus step. The Weyl function on `[0, l]` for a pair `P1, P2` is the
//! linear-fractional image `φ = i(W11 P1 + W12 P2)(W21 P1 + W22 P2)⁻¹` with
//! `W(l, z) = w(l, z̄)*`; as `l` grows the admissible values shrink to the
//! Weyl function of the half-line problem.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::linalg::{c64, expm, fro, identity, inverse, j_matrix, max_abs, norm2, solve, vstack, CMat, I};

/// A Hamiltonian `H(x)`, `2p × 2p`, Hermitian and nonnegative.
pub trait Hamiltonian: Sync {
    fn p(&self) -> usize;
    fn eval(&self, x: f64) -> CMat;
}

impl Hamiltonian for GridFunction {
    fn p(&self) -> usize {
        self.rows / 2
    }

    fn eval(&self, x: f64) -> CMat {
        self.interpolate(x)
    }
}

/// A Hamiltonian given by a closure.
pub struct FnHamiltonian<F> {
    pub p: usize,
    pub f: F,
}

impl<F: Fn(f64) -> CMat + Sync> Hamiltonian for FnHamiltonian<F> {
    fn p(&self) -> usize {
        self.p
    }

    fn eval(&self, x: f64) -> CMat {
        (self.f)(x)
    }
}

#[derive(Debug, Clone)]
pub struct DiskOptions {
    /// Interval length; `40 / Im z` when absent.
    pub l: Option<f64>,
    /// Number of Magnus cells; chosen from `l`, `|z|` and `‖H‖` when absent.
    pub cells: Option<usize>,
    /// `(P1, P2)`; `(I, iI)` when absent.
    pub pair: Option<(CMat, CMat)>,
}

impl Default for DiskOptions {
    fn default() -> Self {
        Self { l: None, cells: None, pair: None }
    }
}

#[derive(Debug, Clone)]
pub struct DiskResult {
    /// Value for the chosen pair.
    pub phi: CMat,
    /// Center of the Weyl disk, when the propagated fundamental matrix is
    /// well enough conditioned to resolve it.
    pub center: Option<CMat>,
    /// Bound on the distance from the center to any admissible value; absent
    /// together with `center`.
    pub radius: Option<f64>,
    pub l: f64,
    pub cells: usize,
}

/// Fundamental solution `w(l, z)` scaled by `e^{−scale}` to avoid overflow.
struct Scaled {
    w: CMat,
    log_scale: f64,
}

/// Fourth-order Magnus propagator of cell `c`.
fn cell_propagator<H: Hamiltonian + ?Sized>(ham: &H, z: Complex64, h: f64, c: usize, j: &CMat) -> CMat {
    let off = h / (2.0 * 3f64.sqrt());
    let mid = (c as f64 + 0.5) * h;
    let a1 = j * ham.eval(mid - off) * (I * z);
    let a2 = j * ham.eval(mid + off) * (I * z);
    let comm = &a2 * &a1 - &a1 * &a2;
    let omega = (&a1 + &a2) * c64(0.5 * h, 0.0) + comm * c64(3f64.sqrt() / 12.0 * h * h, 0.0);
    expm(&omega)
}

fn propagate<H: Hamiltonian + ?Sized>(ham: &H, z: Complex64, l: f64, cells: usize) -> Scaled {
    let j = j_matrix(ham.p());
    let h = l / cells as f64;
    let mut w = identity(2 * ham.p());
    let mut log_scale = 0.0;
    for c in 0..cells {
        w = cell_propagator(ham, z, h, c, &j) * w;
        let n = max_abs(&w);
        if n > 1e100 {
            w /= c64(n, 0.0);
            log_scale += n.ln();
        }
    }
    Scaled { w, log_scale }
}

/// Orthonormal basis of the column space of `w(l, z̄)* Y0`.
///
/// The product is applied from the right end, `E_1* ⋯ E_m* Y0`, and the
/// columns are re-orthonormalized after every cell. Channels growing at
/// different rates would otherwise collapse onto the dominant direction.
fn adjoint_subspace<H: Hamiltonian + ?Sized>(ham: &H, z: Complex64, l: f64, cells: usize, y0: CMat) -> CMat {
    let j = j_matrix(ham.p());
    let h = l / cells as f64;
    let mut y = y0;
    for c in (0..cells).rev() {
        y = cell_propagator(ham, z.conj(), h, c, &j).adjoint() * y;
        y = y.qr().q();
    }
    y
}

/// Number of cells used when none is given.
pub fn default_cells<H: Hamiltonian + ?Sized>(ham: &H, z: Complex64, l: f64) -> usize {
    let probes = 16;
    let hmax = (0..=probes).map(|k| fro(&ham.eval(l * k as f64 / probes as f64))).fold(0.0, f64::max);
    let rate = z.norm() * hmax.max(1e-3);
    ((l * rate / 0.05).ceil() as usize).clamp(200, 200_000)
}

/// `[ψ; I]* K [ψ; I] ≥ 0` with `ψ = −iφ` and `K = J w(z)* J w(z) J` describes
/// the disk; returns its center and radius.
fn disk_geometry<H: Hamiltonian + ?Sized>(ham: &H, z: Complex64, l: f64, cells: usize) -> Option<(CMat, f64)> {
    let p = ham.p();
    let jm = j_matrix(p);
    let fwd = propagate(ham, z, l, cells);
    let bwd = propagate(ham, z.conj(), l, cells);
    let t = fwd.w.view((0, 0), (2 * p, p)).into_owned();
    let u = fwd.w.view((0, p), (2 * p, p)).into_owned();
    let v = bwd.w.view((0, p), (2 * p, p)).into_owned();
    let k11 = u.adjoint() * &jm * &u;
    let k12 = u.adjoint() * &jm * &t;
    let center = -solve(&k11, &k12).ok()? * I;
    let neg_k11_inv = inverse(&(-k11)).ok()?;
    let r = inverse(&(v.adjoint() * &jm * &v)).ok()?;
    let radius = (norm2(&neg_k11_inv) * norm2(&r)).sqrt() * (-(fwd.log_scale + bwd.log_scale)).exp();
    (center.iter().all(|c| c.is_finite()) && radius.is_finite()).then_some((center, radius))
}

/// Weyl-disk value, center and radius at `z` for the interval `[0, l]`.
pub fn weyl_disk_approx<H: Hamiltonian + ?Sized>(ham: &H, z: Complex64, opts: &DiskOptions) -> Result<DiskResult> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("the Weyl disk needs Im z > 0, got {z}")));
    }
    let p = ham.p();
    let l = opts.l.unwrap_or(40.0 / z.im);
    if !(l > 0.0) {
        return Err(Error::Domain(format!("interval length must be positive, got {l}")));
    }
    let cells = opts.cells.unwrap_or_else(|| default_cells(ham, z, l));
    let (p1, p2) = opts.pair.clone().unwrap_or_else(|| (identity(p), identity(p) * I));
    if p1.shape() != (p, p) || p2.shape() != (p, p) {
        return Err(Error::Dimension(format!("pair matrices must be {p}x{p}")));
    }
    // Y = w(l, z̄)* [P1; P2], φ = i Y1 Y2⁻¹; only the column space of Y matters.
    let y = adjoint_subspace(ham, z, l, cells, vstack(&p1, &p2));
    let y1 = y.view((0, 0), (p, p)).into_owned();
    let y2 = y.view((p, 0), (p, p)).into_owned();
    let phi = (y1 * inverse(&y2).map_err(|_| Error::Singular {
        what: "pair is degenerate at this z (denominator block is singular)".into(),
        z,
    })?) * I;
    let (center, radius) = match disk_geometry(ham, z, l, cells) {
        Some((c, r)) => (Some(c), Some(r)),
        None => (None, None),
    };
    Ok(DiskResult { phi, center, radius, l, cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_canonical_system_converges_to_i() {
        // H0 = [D/2; 1][D/2 1] with D = −2 has Weyl function i.
        let ham = FnHamiltonian {
            p: 1,
            f: |_x: f64| CMat::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(-1.0, 0.0), c64(-1.0, 0.0), c64(1.0, 0.0)]),
        };
        for z in [c64(0.0, 1.0), c64(1.0, 1.0), c64(-0.5, 2.0)] {
            let res = weyl_disk_approx(&ham, z, &DiskOptions::default()).unwrap();
            assert!((res.phi[(0, 0)] - I).norm() < 1e-6, "{z}: {}", res.phi);
            assert!((res.center.unwrap()[(0, 0)] - I).norm() < 1e-6);
            assert!(res.radius.unwrap() < 1e-6);
        }
    }

    #[test]
    fn lower_half_plane_is_rejected() {
        let ham = FnHamiltonian { p: 1, f: |_x: f64| identity(2) };
        assert!(matches!(weyl_disk_approx(&ham, c64(0.0, -1.0), &DiskOptions::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn pairs_stay_inside_the_disk() {
        let ham = FnHamiltonian {
            p: 1,
            f: |x: f64| {
                let b = CMat::from_row_slice(1, 2, &[c64(x.cos(), 0.3 * x.sin()), c64(1.0, 0.0)]);
                b.adjoint() * b
            },
        };
        let z = c64(0.3, 1.0);
        for l in [1.0, 3.0] {
            let a = weyl_disk_approx(&ham, z, &DiskOptions { l: Some(l), ..Default::default() }).unwrap();
            let pair = (identity(1) * c64(1.0, 0.5), identity(1) * c64(0.2, 1.0));
            let b = weyl_disk_approx(&ham, z, &DiskOptions { l: Some(l), pair: Some(pair), ..Default::default() })
                .unwrap();
            let dist = fro(&(&a.phi - &b.phi));
            let radius = a.radius.unwrap();
            assert!(dist <= 2.0 * radius, "l = {l}: {dist} vs radius {radius}");
            assert!(fro(&(&a.phi - a.center.as_ref().unwrap())) <= radius * (1.0 + 1e-9));
        }
    }
}
