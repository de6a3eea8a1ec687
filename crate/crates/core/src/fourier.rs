//! Transforms between Weyl functions and amplitude data.
//!
//! Forward: `φ` from an amplitude `s` by Laplace-type integrals along the
//! positive axis. Backward: `s` and the accelerant `k` from samples of `φ` on a
//! horizontal line `Im z = η`, by a truncated inverse Fourier integral.
//!
//! The backward integrand decays only like `1/ζ`. Before integrating, the
//! known behaviour `φ(z) ≈ φ∞ + c1/z` is subtracted, and its contribution is
//! added back in closed form. What is left decays like `1/ζ³`, so a plain
//! trapezoid rule on `[−a, a]` converges quickly.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gbdt::GbdtSystem;
use crate::grid::GridFunction;
use crate::linalg::{c64, diag_real, hermitian_eigenvalues, identity, norm2, zeros, CMat, I};
use crate::rational::Realization;
use crate::structured::{weyl_disk_approx, DiskOptions, Hamiltonian};

/// Where the samples of a [`WeylSampler`] come from.
#[derive(Debug, Clone, PartialEq)]
pub enum SamplerSource {
    Gbdt,
    DiskOracle,
    /// Samples on `Im z = η`, linearly interpolated in `ζ = Re z`.
    Tabulated { eta: f64, zeta_min: f64, zeta_max: f64 },
    Function,
}

type SampleFn = dyn Fn(Complex64) -> Result<CMat> + Send + Sync;

/// A `p × p` matrix function on the upper half-plane.
#[derive(Clone)]
pub struct WeylSampler {
    p: usize,
    source: SamplerSource,
    f: Arc<SampleFn>,
}

impl std::fmt::Debug for WeylSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeylSampler").field("p", &self.p).field("source", &self.source).finish()
    }
}

impl WeylSampler {
    pub fn from_fn(p: usize, f: impl Fn(Complex64) -> Result<CMat> + Send + Sync + 'static) -> Self {
        Self { p, source: SamplerSource::Function, f: Arc::new(f) }
    }

    /// The constant function `value`.
    pub fn constant(value: CMat) -> Self {
        let p = value.nrows();
        Self::from_fn(p, move |_| Ok(value.clone()))
    }

    /// Weyl function `φ` of an explicit system (requires `D < 0`).
    pub fn from_gbdt(system: &GbdtSystem) -> Result<Self> {
        if !system.params().d_negative() {
            return Err(Error::Unsupported("the Weyl function needs D < 0".into()));
        }
        let pair = system.weyl_pair();
        Ok(Self { p: system.p(), source: SamplerSource::Gbdt, f: Arc::new(move |z| pair.phi(z)) })
    }

    pub fn from_realization(r: Realization) -> Self {
        Self { p: r.p, source: SamplerSource::Gbdt, f: Arc::new(move |z| r.eval(z)) }
    }

    /// Brute-force Weyl function from Weyl disks of the Hamiltonian.
    pub fn disk_oracle<H: Hamiltonian + Send + 'static>(ham: Arc<H>, opts: DiskOptions) -> Self {
        let p = ham.p();
        Self {
            p,
            source: SamplerSource::DiskOracle,
            f: Arc::new(move |z| Ok(weyl_disk_approx(ham.as_ref(), z, &opts)?.phi)),
        }
    }

    /// Samples `values[j] = φ(zetas[j] + iη)` with increasing `zetas`.
    pub fn tabulated(eta: f64, zetas: Vec<f64>, values: Vec<CMat>) -> Result<Self> {
        if zetas.len() != values.len() || zetas.len() < 2 {
            return Err(Error::Dimension(format!(
                "need at least two samples with matching abscissae ({} vs {})",
                zetas.len(),
                values.len()
            )));
        }
        if !(eta > 0.0) {
            return Err(Error::Domain(format!("samples must lie in the upper half-plane, eta = {eta}")));
        }
        if zetas.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parse("sample abscissae must be strictly increasing".into()));
        }
        let p = values[0].nrows();
        if values.iter().any(|v| v.shape() != (p, p)) {
            return Err(Error::Dimension("all samples must be square of the same size".into()));
        }
        let (lo, hi) = (zetas[0], *zetas.last().unwrap());
        let source = SamplerSource::Tabulated { eta, zeta_min: lo, zeta_max: hi };
        let f = move |z: Complex64| -> Result<CMat> {
            if (z.im - eta).abs() > 1e-12 * (1.0 + eta) {
                return Err(Error::Domain(format!("tabulated samples live on Im z = {eta}, asked for {z}")));
            }
            if z.re < lo - 1e-12 || z.re > hi + 1e-12 {
                return Err(Error::Domain(format!("Re z = {} outside the tabulated range [{lo}, {hi}]", z.re)));
            }
            let j = zetas.partition_point(|&t| t <= z.re).clamp(1, zetas.len() - 1);
            let t = ((z.re - zetas[j - 1]) / (zetas[j] - zetas[j - 1])).clamp(0.0, 1.0);
            Ok(&values[j - 1] * c64(1.0 - t, 0.0) + &values[j] * c64(t, 0.0))
        };
        Ok(Self { p, source, f: Arc::new(f) })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn source(&self) -> &SamplerSource {
        &self.source
    }

    pub fn eval(&self, z: Complex64) -> Result<CMat> {
        let v = (self.f)(z)?;
        if v.shape() != (self.p, self.p) {
            return Err(Error::Dimension(format!("sampler returned {:?}, expected {}x{}", v.shape(), self.p, self.p)));
        }
        Ok(v)
    }

    /// Whether `z` can be sampled; tabulated data only covers one line segment.
    pub fn covers(&self, z: Complex64) -> bool {
        match self.source {
            SamplerSource::Tabulated { eta, zeta_min, zeta_max } => {
                (z.im - eta).abs() <= 1e-12 * (1.0 + eta) && z.re >= zeta_min - 1e-12 && z.re <= zeta_max + 1e-12
            }
            _ => z.im > 0.0,
        }
    }
}

/// Which Laplace-type representation links `s` and `φ`.
#[derive(Debug, Clone, PartialEq)]
pub enum TransformMode {
    /// `φ(z) = 2z ∫ e^{izx} s(x)* dx`
    Dirac,
    /// `φ(z) = z² ∫ e^{izx} χ(x) dx`, `χ(x) = −2i ∫_0^x s(t)* dt`
    Chi,
    /// `φ(z) = −zD ∫ e^{izx} s(x) dx`, `D < 0` diagonal
    Canonical { d: Vec<f64> },
}

impl TransformMode {
    fn check(&self, p: usize) -> Result<()> {
        if let TransformMode::Canonical { d } = self {
            if d.len() != p {
                return Err(Error::Dimension(format!("D has {} entries, expected {p}", d.len())));
            }
            if let Some(v) = d.iter().find(|v| !(**v < 0.0)) {
                return Err(Error::Domain(format!("canonical mode needs D < 0, found {v}")));
            }
        }
        Ok(())
    }

    /// `lim φ(z)` as `z → ∞`, fixed by `s(0) = ½I`.
    fn phi_infinity(&self, p: usize) -> CMat {
        match self {
            TransformMode::Canonical { d } => diag_real(&d.iter().map(|v| 0.5 * v.abs()).collect::<Vec<_>>()) * I,
            _ => identity(p) * I,
        }
    }
}

/// `φ(z)` together with the size of the analytic tail term.
#[derive(Debug, Clone)]
pub struct LaplaceValue {
    pub phi: CMat,
    /// Norm of the contribution from `x > X`, where `s` is continued by its
    /// last value.
    pub tail: f64,
}

/// `∫_0^1 t^m e^{ωt} dt` for `m = 0, 1, 2`.
fn moments(w: Complex64) -> [Complex64; 3] {
    if w.norm() < 0.5 {
        // Σ_k ω^k / (k! (k + m + 1)), 24 terms reach double precision here.
        let mut out = [Complex64::new(0.0, 0.0); 3];
        let mut term = c64(1.0, 0.0);
        for k in 0..24 {
            for (m, o) in out.iter_mut().enumerate() {
                *o += term / (k + m + 1) as f64;
            }
            term = term * w / (k + 1) as f64;
        }
        out
    } else {
        let e = w.exp();
        let one = c64(1.0, 0.0);
        [
            (e - one) / w,
            (e * (w - one) + one) / (w * w),
            (e * (w * w - w * 2.0 + 2.0) - 2.0) / (w * w * w),
        ]
    }
}

/// Piecewise-linear nodes of `s` on `[0, X]`; a grid starting after `0` is
/// extended linearly to the origin.
fn linear_nodes(s: &GridFunction) -> Result<(Vec<f64>, Vec<CMat>)> {
    if s.is_empty() {
        return Err(Error::Dimension("amplitude has no samples".into()));
    }
    if s.x0 < 0.0 {
        return Err(Error::Domain(format!("amplitude grid must start at x ≥ 0, got {}", s.x0)));
    }
    let mut xs = s.xs();
    let mut vals = s.values.clone();
    if s.x0 > 1e-14 * s.h {
        let v0 = if s.len() >= 2 {
            &vals[0] - (&vals[1] - &vals[0]) * c64(s.x0 / s.h, 0.0)
        } else {
            vals[0].clone()
        };
        xs.insert(0, 0.0);
        vals.insert(0, v0);
    }
    Ok((xs, vals))
}

/// `φ(z)` from the amplitude `s` on `[0, X]`.
///
/// `s` is taken as its piecewise-linear interpolant and every cell is
/// integrated exactly, so the modes agree with each other up to rounding.
pub fn weyl_from_amplitude(s: &GridFunction, z: Complex64, mode: &TransformMode) -> Result<LaplaceValue> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("the Laplace transform needs Im z > 0, got {z}")));
    }
    if s.rows != s.cols {
        return Err(Error::Dimension("amplitude must be square".into()));
    }
    let p = s.rows;
    mode.check(p)?;
    let (xs, vals) = linear_nodes(s)?;
    let vals: Vec<CMat> = match mode {
        TransformMode::Canonical { .. } => vals,
        _ => vals.iter().map(|v| v.adjoint()).collect(),
    };
    let x_end = *xs.last().unwrap();
    let s_end = vals.last().unwrap().clone();
    let e_end = (I * z * x_end).exp();

    let mut acc = zeros(p, p);
    let mut chi = zeros(p, p);
    for c in 0..xs.len() - 1 {
        let (xa, w) = (xs[c], xs[c + 1] - xs[c]);
        let (sa, sb) = (&vals[c], &vals[c + 1]);
        let [g0, g1, g2] = moments(I * z * w);
        let phase = (I * z * xa).exp() * w;
        let slope = sb - sa;
        match mode {
            TransformMode::Chi => {
                // χ(xa + u) = χa − 2i(sa u + (sb − sa) u² / 2w)
                let quad = sa * g1 + &slope * (g2 * 0.5);
                acc += (&chi * g0 - quad * (I * 2.0 * w)) * phase;
                chi -= (sa + sb) * (I * w);
            }
            _ => acc += (sa * g0 + slope * g1) * phase,
        }
    }

    let (phi, tail) = match mode {
        TransformMode::Dirac => (acc * (z * 2.0), s_end * (I * 2.0 * e_end)),
        TransformMode::Chi => {
            let beta = s_end * (-I * 2.0);
            (acc * (z * z), (chi * (I * z) - beta) * e_end)
        }
        TransformMode::Canonical { d } => {
            let dm = diag_real(d);
            (&dm * acc * (-z), dm * s_end * (-I * e_end))
        }
    };
    Ok(LaplaceValue { tail: norm2(&tail), phi: phi + tail })
}

/// Inverse transforms supported by [`amplitude_from_weyl`].
#[derive(Debug, Clone, PartialEq)]
pub enum AmplitudeMode {
    Dirac,
    Canonical { d: Vec<f64> },
}

impl AmplitudeMode {
    fn transform(&self) -> TransformMode {
        match self {
            AmplitudeMode::Dirac => TransformMode::Dirac,
            AmplitudeMode::Canonical { d } => TransformMode::Canonical { d: d.clone() },
        }
    }
}

#[derive(Debug, Clone)]
pub struct AmplitudeOptions {
    /// Height of the integration line, `η > 0`.
    pub eta: f64,
    /// Truncation `[−a, a]` of the ζ integral.
    pub a: f64,
    /// Output grid `x_j = x0 + j h`, `j < len`.
    pub h: f64,
    pub x0: f64,
    pub len: usize,
    pub mode: AmplitudeMode,
    /// Trapezoid step in ζ; `min(0.1, 2πη/40)` when absent.
    pub dzeta: Option<f64>,
    /// Decay rate of the subtracted `c1/(z + iμ)` term.
    pub mu: f64,
    /// Compare with truncation `2a` and report the difference.
    pub richardson: bool,
    /// Level above which the truncation estimate raises a warning.
    pub tolerance: f64,
}

impl AmplitudeOptions {
    pub fn new(mode: AmplitudeMode, h: f64, x0: f64, len: usize) -> Self {
        Self { eta: 1.0, a: 200.0, h, x0, len, mode, dzeta: None, mu: 1.0, richardson: true, tolerance: 1e-3 }
    }

    /// The sample spacing along the line: `dzeta`, or `min(0.1, 2πη/40)`.
    pub fn effective_dzeta(&self) -> f64 {
        self.dzeta.unwrap_or((2.0 * std::f64::consts::PI * self.eta / 40.0).min(0.1))
    }
}

#[derive(Debug, Clone)]
pub struct AmplitudeResult {
    pub s: GridFunction,
    /// `k = s'` (Dirac) or `k = |D| s'` (canonical) on the same grid.
    pub k: GridFunction,
    /// Estimated `lim z(φ(z) − φ∞)`.
    pub c1: CMat,
    /// `max_x ‖s_a(x) − s_2a(x)‖`, when the Richardson check ran.
    pub truncation_estimate: Option<f64>,
    pub warnings: Vec<String>,
}

/// Fourth-order finite differences; one-sided five-point stencils at the ends.
pub fn derivative4(values: &[CMat], h: f64) -> Result<Vec<CMat>> {
    let n = values.len();
    if n < 5 {
        return Err(Error::Dimension(format!("need at least 5 points for the stencil, got {n}")));
    }
    let comb = |coef: &[(usize, f64)]| -> CMat {
        let mut out = zeros(values[0].nrows(), values[0].ncols());
        for &(j, c) in coef {
            out += &values[j] * c64(c / (12.0 * h), 0.0);
        }
        out
    };
    Ok((0..n)
        .map(|j| match j {
            0 => comb(&[(0, -25.0), (1, 48.0), (2, -36.0), (3, 16.0), (4, -3.0)]),
            1 => comb(&[(0, -3.0), (1, -10.0), (2, 18.0), (3, -6.0), (4, 1.0)]),
            _ if j == n - 2 => comb(&[(n - 1, 3.0), (n - 2, 10.0), (n - 3, -18.0), (n - 4, 6.0), (n - 5, -1.0)]),
            _ if j == n - 1 => comb(&[(n - 1, 25.0), (n - 2, -48.0), (n - 3, 36.0), (n - 4, -16.0), (n - 5, 3.0)]),
            _ => comb(&[(j - 2, 1.0), (j - 1, -8.0), (j + 1, 8.0), (j + 2, -1.0)]),
        })
        .collect())
}

/// Samples of `φ` on the trapezoid nodes `ζ_n = −a + n dζ`.
struct LineSamples {
    eta: f64,
    a: f64,
    dzeta: f64,
    values: Vec<CMat>,
}

impl LineSamples {
    fn take(phi: &WeylSampler, eta: f64, a: f64, dzeta: f64) -> Result<Self> {
        // An even number of steps keeps ±a/2 on the grid for the sub-range.
        let mut steps = (2.0 * a / dzeta).ceil() as usize;
        steps += steps % 4;
        let dzeta = 2.0 * a / steps as f64;
        let values = (0..=steps)
            .into_par_iter()
            .map(|n| phi.eval(c64(-a + n as f64 * dzeta, eta)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { eta, a, dzeta, values })
    }

    /// The central part `[−a/2, a/2]`.
    fn half(&self) -> Self {
        let steps = self.values.len() - 1;
        Self {
            eta: self.eta,
            a: 0.5 * self.a,
            dzeta: self.dzeta,
            values: self.values[steps / 4..=3 * steps / 4].to_vec(),
        }
    }

    fn zeta(&self, n: usize) -> f64 {
        -self.a + n as f64 * self.dzeta
    }
}

/// `s` on the output grid from one set of line samples.
fn amplitude_on_line(line: &LineSamples, opts: &AmplitudeOptions, phi_inf: &CMat) -> (Vec<CMat>, CMat) {
    let (eta, mu) = (line.eta, opts.mu);
    let last = line.values.len() - 1;
    let z_lo = c64(-line.a, eta);
    let z_hi = c64(line.a, eta);
    let c1 = ((&line.values[0] - phi_inf) * z_lo + (&line.values[last] - phi_inf) * z_hi) * c64(0.5, 0.0);

    // g(ζ) = (φ − φ∞ − c1/(z + iμ)) / z with trapezoid weights folded in.
    let g: Vec<CMat> = line
        .values
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let z = c64(line.zeta(n), eta);
            let w = if n == 0 || n == last { 0.5 } else { 1.0 } * line.dzeta;
            (v - phi_inf - &c1 / (z + I * mu)) * (w / z)
        })
        .collect();

    let p = phi_inf.nrows();
    let half = identity(p) * c64(0.5, 0.0);
    let (norm, inv_abs_d) = match &opts.mode {
        AmplitudeMode::Dirac => (1.0 / (4.0 * std::f64::consts::PI), None),
        AmplitudeMode::Canonical { d } => (
            1.0 / (2.0 * std::f64::consts::PI),
            Some(diag_real(&d.iter().map(|v| 1.0 / v.abs()).collect::<Vec<_>>())),
        ),
    };
    let s = (0..opts.len)
        .into_par_iter()
        .map(|j| {
            let x = opts.x0 + j as f64 * opts.h;
            // e^{−iζ_n x} by rotation from e^{iax}.
            let step = (-I * line.dzeta * x).exp();
            let mut rot = (I * line.a * x).exp();
            let mut sum = zeros(p, p);
            for gn in &g {
                sum += gn * rot;
                rot *= step;
            }
            let sigma = sum * c64((eta * x).exp() * norm, 0.0);
            let decay = if mu * x < 1e-8 { x * (1.0 - 0.5 * mu * x) } else { -(-mu * x).exp_m1() / mu };
            match &inv_abs_d {
                None => &half + sigma.adjoint() - c1.adjoint() * c64(0.5 * decay, 0.0),
                Some(dinv) => &half + dinv * (sigma - &c1 * c64(decay, 0.0)),
            }
        })
        .collect();
    (s, c1)
}

/// `s` and `k` from samples of `φ` along `Im z = η`.
pub fn amplitude_from_weyl(phi: &WeylSampler, opts: &AmplitudeOptions) -> Result<AmplitudeResult> {
    if !(opts.eta > 0.0) {
        return Err(Error::Domain(format!("eta must be positive, got {}", opts.eta)));
    }
    if !(opts.a > 0.0) || !(opts.h > 0.0) || !(opts.mu > 0.0) || opts.x0 < 0.0 {
        return Err(Error::Domain("a, h and mu must be positive and x0 nonnegative".into()));
    }
    let p = phi.p();
    opts.mode.transform().check(p)?;
    let phi_inf = opts.mode.transform().phi_infinity(p);
    let dzeta = opts.effective_dzeta();
    if !(dzeta > 0.0) {
        return Err(Error::Domain(format!("dzeta must be positive, got {dzeta}")));
    }
    let mut warnings = Vec::new();
    let x_end = opts.x0 + opts.len.saturating_sub(1) as f64 * opts.h;
    if x_end >= std::f64::consts::PI / dzeta {
        warnings.push(format!("grid end {x_end} exceeds half the aliasing period 2π/dζ"));
    }

    let wide = opts.richardson && phi.covers(c64(-2.0 * opts.a, opts.eta)) && phi.covers(c64(2.0 * opts.a, opts.eta));
    if opts.richardson && !wide {
        warnings.push("samples do not cover [−2a, 2a]; truncation check skipped".into());
    }
    let (s_vals, c1, estimate) = if wide {
        let line2 = LineSamples::take(phi, opts.eta, 2.0 * opts.a, dzeta)?;
        let line = line2.half();
        let (s1, c1) = amplitude_on_line(&line, opts, &phi_inf);
        let (s2, _) = amplitude_on_line(&line2, opts, &phi_inf);
        let diff = s1.iter().zip(&s2).map(|(a, b)| crate::linalg::fro(&(a - b))).fold(0.0, f64::max);
        (s1, c1, Some(diff))
    } else {
        let line = LineSamples::take(phi, opts.eta, opts.a, dzeta)?;
        let (s1, c1) = amplitude_on_line(&line, opts, &phi_inf);
        (s1, c1, None)
    };
    if let Some(e) = estimate {
        if e > opts.tolerance {
            warnings.push(format!("truncation a = {} looks too small: |s_a − s_2a| = {e:.3e}", opts.a));
        }
    }

    let mut s_vals = s_vals;
    if opts.x0.abs() <= 1e-14 * opts.h {
        s_vals[0] = identity(p) * c64(0.5, 0.0);
    }
    let mut k_vals = derivative4(&s_vals, opts.h)?;
    if let AmplitudeMode::Canonical { d } = &opts.mode {
        let abs_d = diag_real(&d.iter().map(|v| v.abs()).collect::<Vec<_>>());
        k_vals = k_vals.into_iter().map(|k| &abs_d * k).collect();
    }
    Ok(AmplitudeResult {
        s: GridFunction { rows: p, cols: p, x0: opts.x0, h: opts.h, values: s_vals },
        k: GridFunction { rows: p, cols: p, x0: opts.x0, h: opts.h, values: k_vals },
        c1,
        truncation_estimate: estimate,
        warnings,
    })
}

/// Result of [`herglotz_check`].
#[derive(Debug, Clone)]
pub struct HerglotzReport {
    /// Smallest eigenvalue of `Im φ(z)` over the grid.
    pub min_im_eigenvalue: f64,
    pub worst_z: Complex64,
    pub passed: bool,
    /// `sup ‖(z + iδ)⁻² φ(z + iδ)‖` over the grid, a proxy for the square
    /// integrability along horizontal lines that Herglotz functions enjoy.
    pub integrability: f64,
    pub delta: f64,
}

/// Threshold on the smallest eigenvalue of `Im φ`.
pub const HERGLOTZ_TOL: f64 = 1e-9;

/// Samples `Im φ = (φ − φ*)/2i` on `grid`, which must lie in `C₊`.
pub fn herglotz_check(phi: &WeylSampler, grid: &[Complex64], delta: f64) -> Result<HerglotzReport> {
    if grid.is_empty() {
        return Err(Error::Dimension("empty sample grid".into()));
    }
    if let Some(z) = grid.iter().find(|z| !(z.im > 0.0)) {
        return Err(Error::Domain(format!("grid point {z} is not in the upper half-plane")));
    }
    let rows = grid
        .par_iter()
        .map(|&z| {
            let v = phi.eval(z)?;
            let im = (&v - v.adjoint()) * (-I * 0.5);
            let lam = hermitian_eigenvalues(&im)[0];
            let zs = z + I * delta;
            let proxy = if phi.covers(zs) { norm2(&(phi.eval(zs)? / (zs * zs))) } else { f64::NAN };
            Ok((lam, z, proxy))
        })
        .collect::<Result<Vec<_>>>()?;
    let (min_im_eigenvalue, worst_z) =
        rows.iter().map(|r| (r.0, r.1)).fold((f64::INFINITY, grid[0]), |acc, r| if r.0 < acc.0 { r } else { acc });
    let integrability = rows.iter().map(|r| r.2).filter(|v| v.is_finite()).fold(0.0, f64::max);
    Ok(HerglotzReport {
        min_im_eigenvalue,
        worst_z,
        passed: min_im_eigenvalue >= -HERGLOTZ_TOL,
        integrability,
        delta,
    })
}

/// Weyl function of the Dirac system with constant scalar potential `v`:
/// `φ(z) = i(ω + z − v̄)/(ω + z + v̄)`, `ω = √(z² − |v|²)`, `Im ω > 0`.
pub fn constant_potential_weyl(v: Complex64, z: Complex64) -> Complex64 {
    let mut w = (z * z - v.norm_sqr()).sqrt();
    if w.im < 0.0 {
        w = -w;
    }
    I * (w + z - v.conj()) / (w + z + v.conj())
}
