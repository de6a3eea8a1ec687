//! Uniformly sampled matrix functions and difference kernels.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, fro, CMat};

/// A matrix-valued function sampled at `x0 + k h`, `k = 0, 1, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub rows: usize,
    pub cols: usize,
    pub x0: f64,
    pub h: f64,
    #[serde(with = "crate::io::cmat_vec")]
    pub values: Vec<CMat>,
}

impl GridFunction {
    pub fn new(rows: usize, cols: usize, x0: f64, h: f64, values: Vec<CMat>) -> Result<Self> {
        if !(h > 0.0) || !x0.is_finite() {
            return Err(Error::Dimension(format!("grid step must be positive (h = {h}, x0 = {x0})")));
        }
        if let Some(k) = values.iter().position(|m| m.shape() != (rows, cols)) {
            return Err(Error::Dimension(format!(
                "sample {k} is {:?}, expected ({rows}, {cols})",
                values[k].shape()
            )));
        }
        Ok(Self { rows, cols, x0, h, values })
    }

    pub fn from_fn(rows: usize, cols: usize, x0: f64, h: f64, len: usize, f: impl Fn(f64) -> CMat) -> Self {
        let values = (0..len).map(|k| f(x0 + k as f64 * h)).collect();
        Self { rows, cols, x0, h, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.h
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.x(k)).collect()
    }

    /// Piecewise-linear interpolation, clamped to the end samples.
    pub fn interpolate(&self, x: f64) -> CMat {
        let n = self.len();
        if n == 1 {
            return self.values[0].clone();
        }
        let t = (x - self.x0) / self.h;
        if t <= 0.0 {
            return self.values[0].clone();
        }
        if t >= (n - 1) as f64 {
            return self.values[n - 1].clone();
        }
        let k = t.floor() as usize;
        let f = t - k as f64;
        &self.values[k] * c64(1.0 - f, 0.0) + &self.values[k + 1] * c64(f, 0.0)
    }

    pub fn map(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        let values: Vec<CMat> = self.values.iter().map(f).collect();
        let (rows, cols) = values.first().map_or((self.rows, self.cols), |m| m.shape());
        Self { rows, cols, x0: self.x0, h: self.h, values }
    }

    /// Largest Frobenius-norm difference to `other` over samples whose
    /// abscissa lies in `[lo, hi]`. The two grids must coincide.
    pub fn sup_distance(&self, other: &GridFunction, lo: f64, hi: f64) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .filter(|(k, _)| (lo..=hi).contains(&self.x(*k)))
            .map(|(_, (a, b))| fro(&(a - b)))
            .fold(0.0, f64::max))
    }

    pub fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        let same = self.len() == other.len()
            && (self.h - other.h).abs() <= 1e-12 * self.h
            && (self.x0 - other.x0).abs() <= 1e-12 * (1.0 + self.x0.abs())
            && self.rows == other.rows
            && self.cols == other.cols;
        if same {
            Ok(())
        } else {
            Err(Error::Dimension("grid functions live on different grids".into()))
        }
    }
}

/// Samples of an accelerant `k` on the midpoint grid `x_m = (m + ½)h` of
/// `[0, M h]`. Negative arguments are defined by `k(−x) = k(x)*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceKernel {
    pub p: usize,
    pub h: f64,
    #[serde(with = "crate::io::cmat_vec")]
    pub samples: Vec<CMat>,
}

impl DifferenceKernel {
    pub fn new(p: usize, h: f64, samples: Vec<CMat>) -> Result<Self> {
        if p == 0 || !(h > 0.0) || !h.is_finite() {
            return Err(Error::Dimension(format!("invalid kernel grid (p = {p}, h = {h})")));
        }
        if let Some(k) = samples.iter().position(|m| m.shape() != (p, p)) {
            return Err(Error::Dimension(format!("kernel sample {k} is not {p}x{p}")));
        }
        if samples.iter().any(|m| m.iter().any(|z| !z.is_finite())) {
            return Err(Error::Domain("kernel samples must be finite".into()));
        }
        Ok(Self { p, h, samples })
    }

    /// Samples `k` at the midpoints of `len` cells of width `h`.
    pub fn from_fn(p: usize, h: f64, len: usize, k: impl Fn(f64) -> CMat) -> Self {
        let samples = (0..len).map(|m| k((m as f64 + 0.5) * h)).collect();
        Self { p, h, samples }
    }

    pub fn zero(p: usize, h: f64, len: usize) -> Self {
        Self { p, h, samples: vec![CMat::zeros(p, p); len] }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Right end of the covered interval.
    pub fn extent(&self) -> f64 {
        self.samples.len() as f64 * self.h
    }

    /// Sample at signed midpoint index: `m ≥ 0` is `x_m`, `m < 0` is `−x_{−m−1}`.
    pub fn at_midpoint(&self, m: isize) -> CMat {
        if m >= 0 {
            self.samples[m as usize].clone()
        } else {
            self.samples[(-m - 1) as usize].adjoint()
        }
    }

    /// Piecewise-linear interpolation of the midpoint samples at `u ≥ 0`,
    /// extended as a constant outside the sampled range.
    fn eval_nonneg(&self, u: f64) -> CMat {
        let t = u / self.h - 0.5;
        let n = self.samples.len();
        if t <= 0.0 {
            return self.samples[0].clone();
        }
        if t >= (n - 1) as f64 {
            return self.samples[n - 1].clone();
        }
        let k = t.floor() as usize;
        let f = t - k as f64;
        &self.samples[k] * c64(1.0 - f, 0.0) + &self.samples[k + 1] * c64(f, 0.0)
    }

    /// `k(u)` for any real `u`, with Hermitian reflection. At `u = 0` the
    /// Hermitian mean of the one-sided limits is returned.
    pub fn eval(&self, u: f64) -> CMat {
        if u > 0.0 {
            self.eval_nonneg(u)
        } else if u < 0.0 {
            self.eval_nonneg(-u).adjoint()
        } else {
            let k0 = self.eval_nonneg(0.0);
            (&k0 + k0.adjoint()) * c64(0.5, 0.0)
        }
    }

    /// Entry `(a, b)` of [`Self::eval`], without forming the whole matrix.
    pub fn eval_entry(&self, u: f64, a: usize, b: usize) -> Complex64 {
        let lin = |u: f64, a: usize, b: usize| -> Complex64 {
            let t = u / self.h - 0.5;
            let n = self.samples.len();
            if t <= 0.0 {
                return self.samples[0][(a, b)];
            }
            if t >= (n - 1) as f64 {
                return self.samples[n - 1][(a, b)];
            }
            let k = t.floor() as usize;
            let f = t - k as f64;
            self.samples[k][(a, b)] * (1.0 - f) + self.samples[k + 1][(a, b)] * f
        };
        if u > 0.0 {
            lin(u, a, b)
        } else if u < 0.0 {
            lin(-u, b, a).conj()
        } else {
            (lin(0.0, a, b) + lin(0.0, b, a).conj()) * 0.5
        }
    }

    /// `∫_0^u k(t) dt` with `k` piecewise constant on the sample cells and zero
    /// beyond the sampled range.
    pub fn primitive(&self) -> KernelPrimitive {
        let mut cum = Vec::with_capacity(self.samples.len() + 1);
        let mut acc = CMat::zeros(self.p, self.p);
        cum.push(acc.clone());
        for s in &self.samples {
            acc += s * c64(self.h, 0.0);
            cum.push(acc.clone());
        }
        KernelPrimitive { h: self.h, cum, samples: self.samples.clone() }
    }

    /// The first `len` samples (the kernel restricted to `[0, len·h]`).
    pub fn truncated(&self, len: usize) -> Self {
        let mut samples = self.samples.clone();
        for s in samples.iter_mut().skip(len) {
            s.fill(c64(0.0, 0.0));
        }
        Self { p: self.p, h: self.h, samples }
    }

    pub fn prefix(&self, len: usize) -> Self {
        Self { p: self.p, h: self.h, samples: self.samples[..len.min(self.len())].to_vec() }
    }

    /// As a grid function on the midpoint grid.
    pub fn to_grid(&self) -> GridFunction {
        GridFunction { rows: self.p, cols: self.p, x0: 0.5 * self.h, h: self.h, values: self.samples.clone() }
    }

    /// From a grid function sampled on a midpoint grid `x0 = h/2`.
    pub fn from_grid(g: &GridFunction) -> Result<Self> {
        if g.rows != g.cols {
            return Err(Error::Dimension("kernel samples must be square".into()));
        }
        if (g.x0 - 0.5 * g.h).abs() > 1e-9 * g.h {
            return Err(Error::Dimension(format!("kernel grid must start at h/2 (x0 = {}, h = {})", g.x0, g.h)));
        }
        Self::new(g.rows, g.h, g.values.clone())
    }
}

/// Running integral of a [`DifferenceKernel`], see [`DifferenceKernel::primitive`].
#[derive(Debug, Clone)]
pub struct KernelPrimitive {
    h: f64,
    cum: Vec<CMat>,
    samples: Vec<CMat>,
}

impl KernelPrimitive {
    pub fn eval(&self, u: f64) -> CMat {
        let n = self.samples.len();
        if u <= 0.0 {
            return self.cum[0].clone();
        }
        let m = (u / self.h).floor() as usize;
        if m >= n {
            return self.cum[n].clone();
        }
        &self.cum[m] + &self.samples[m] * c64(u - m as f64 * self.h, 0.0)
    }
}
