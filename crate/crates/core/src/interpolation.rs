//! Interpolation of a function from its values on the lattice `i(q + ε)`.
//!
//! With `λ = z + i/2 − iε`,
//!
//! ```text
//! F(z) = Σ_n c_n(λ) Σ_{q ≤ n} a_{nq} F(iq + iε),
//! a_{nq} = (−1)^q (n+q)! / ((q!)² (n−q)!),
//! c_n(λ) = (2n+1) Π_{q=1}^{n} (q − ½ + iλ) / Π_{q=0}^{n} (q + ½ − iλ),
//! ```
//!
//! valid for `Im z > ½ + ε`. The inner sums are alternating with terms of
//! size `~5.8ⁿ`, so they are accumulated exactly in rational arithmetic from
//! the exact binary values of the samples. Exact summation does not make the
//! problem well conditioned: a relative perturbation `δ` of the samples is
//! amplified roughly by `(3 + 2√2)ⁿ`, so samples carrying rounding noise are
//! only useful up to `n ≈ 25`. Samples that are exactly representable (or
//! supplied as rationals through [`interpolate_series_exact`]) can be taken
//! much further.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{c64, CMat, I};

type CRat = num_complex::Complex<BigRational>;

/// A real number stored as sign and natural logarithm of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub negative: bool,
    pub ln_abs: f64,
}

impl SignedLog {
    pub fn value(&self) -> f64 {
        let m = self.ln_abs.exp();
        if self.negative {
            -m
        } else {
            m
        }
    }
}

fn check_nq(n: usize, q: usize) -> Result<()> {
    if q > n {
        Err(Error::Domain(format!("a_nq needs q ≤ n, got n = {n}, q = {q}")))
    } else {
        Ok(())
    }
}

/// `a_{nq}` in sign/log form from the ratio `a_{n,q+1}/a_{nq} = −(n+q+1)(n−q)/(q+1)²`.
pub fn coeff_a(n: usize, q: usize) -> Result<SignedLog> {
    check_nq(n, q)?;
    let mut ln_abs = 0.0;
    for j in 0..q {
        let (nf, jf) = (n as f64, j as f64);
        ln_abs += ((nf + jf + 1.0) * (nf - jf)).ln() - 2.0 * (jf + 1.0).ln();
    }
    Ok(SignedLog { negative: q % 2 == 1, ln_abs })
}

/// `a_{nq}` exactly.
pub fn coeff_a_exact(n: usize, q: usize) -> Result<BigInt> {
    check_nq(n, q)?;
    Ok(exact_row(n).swap_remove(q))
}

/// `a_{n0}, …, a_{nn}` exactly.
fn exact_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut a = BigInt::one();
    for q in 0..=n {
        row.push(a.clone());
        if q < n {
            a = -(a * BigInt::from((n + q + 1) * (n - q))) / BigInt::from((q + 1) * (q + 1));
        }
    }
    row
}

/// Poles of `c_n` closer than this are reported as singular.
pub const POLE_TOL: f64 = 1e-12;

/// `c_0(λ), …, c_n(λ)` from `c_0 = 1/(½ − iλ)` and
/// `c_{n+1}/c_n = ((2n+3)/(2n+1)) (n + ½ + iλ)/(n + 3/2 − iλ)`.
pub fn coeff_c_all(n: usize, lambda: Complex64) -> Result<Vec<Complex64>> {
    let denom = |q: usize| c64(q as f64 + 0.5, 0.0) - I * lambda;
    if let Some(q) = (0..=n).find(|&q| denom(q).norm() < POLE_TOL) {
        return Err(Error::Singular { what: format!("c_n has a pole: q + 1/2 - i lambda = 0 at q = {q}"), z: lambda });
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut c = denom(0).inv();
    for m in 0..=n {
        out.push(c);
        let mf = m as f64;
        c *= (2.0 * mf + 3.0) / (2.0 * mf + 1.0) * (c64(mf + 0.5, 0.0) + I * lambda) / denom(m + 1);
    }
    Ok(out)
}

pub fn coeff_c(n: usize, lambda: Complex64) -> Result<Complex64> {
    Ok(*coeff_c_all(n, lambda)?.last().unwrap())
}

/// Which lattice values the samples hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesMode {
    /// `samples[q] = F(i(q+ε))`, series for `F(z)`.
    General,
    /// `samples[q] = φ(i(q+ε))` for a Weyl function; the series is applied to
    /// `φ(z)/z²`.
    WeylDirac,
    /// `samples[q] = φ(z0 + i(q+ε))`; returns `φ(z + z0)`.
    Shifted { z0: Complex64 },
}

/// A matrix with exact complex rational entries, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<CRat>,
}

fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("sample value {x} is not finite")))
}

/// Parses a decimal literal such as `0.1` or `-2.5e-3` to the rational number
/// it denotes, so that `ε = 0.1` means exactly `1/10`.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a decimal number: {text:?}"));
    let t = text.trim();
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10u8);
    let mut r = BigRational::from_integer(num);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -r } else { r })
}

impl ExactMatrix {
    /// The exact binary value of every entry.
    pub fn from_cmat(m: &CMat) -> Result<Self> {
        let entries = m.iter().map(|z| Ok(CRat::new(exact(z.re)?, exact(z.im)?))).collect::<Result<Vec<_>>>()?;
        Ok(Self { rows: m.nrows(), cols: m.ncols(), entries })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> CRat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for c in 0..cols {
            for r in 0..rows {
                entries.push(f(r, c));
            }
        }
        Self { rows, cols, entries }
    }
}

fn to_c64(z: &CRat) -> Complex64 {
    c64(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

fn weight(mode: SeriesMode, q: usize, eps: &BigRational) -> Result<CRat> {
    let base = CRat::new(BigRational::from_integer(q.into()) + eps, BigRational::zero());
    let shifted = match mode {
        SeriesMode::General => return Ok(CRat::one()),
        SeriesMode::WeylDirac => base,
        // q + ε − i z0
        SeriesMode::Shifted { z0 } => base - CRat::new(BigRational::zero(), BigRational::one()) * CRat::new(exact(z0.re)?, exact(z0.im)?),
    };
    if shifted.is_zero() {
        return Err(Error::Singular { what: format!("weight (q + eps - i z0)^-2 is singular at q = {q}"), z: c64(0.0, 0.0) });
    }
    let sq = shifted.clone() * shifted;
    Ok(sq.inv())
}

/// Partial sums `S_0, …, S_N` of the series at `z` from exact samples.
pub fn partial_sums_exact(
    samples: &[ExactMatrix],
    z: Complex64,
    n_max: usize,
    epsilon: &BigRational,
    mode: SeriesMode,
) -> Result<Vec<CMat>> {
    let eps = epsilon.to_f64().unwrap_or(f64::NAN);
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {eps}")));
    }
    if !(z.im > 0.5 + eps) {
        return Err(Error::Domain(format!("the series needs Im z > 1/2 + eps = {}, got z = {z}", 0.5 + eps)));
    }
    if samples.len() < n_max + 1 {
        return Err(Error::Dimension(format!("N = {n_max} needs {} samples, got {}", n_max + 1, samples.len())));
    }
    let (rows, cols) = (samples[0].rows, samples[0].cols);
    if samples.iter().any(|s| s.rows != rows || s.cols != cols || s.entries.len() != rows * cols) {
        return Err(Error::Dimension("samples must all have the same shape".into()));
    }
    let lambda = z + I * (0.5 - eps);
    let c = coeff_c_all(n_max, lambda)?;
    let prefactor = match mode {
        SeriesMode::General => c64(1.0, 0.0),
        SeriesMode::WeylDirac => -z * z,
        SeriesMode::Shifted { z0 } => -(z + z0) * (z + z0),
    };

    // t_q = w_q F_q exactly; inner_n = Σ_q a_nq t_q exactly.
    let weighted: Vec<Vec<CRat>> = samples[..=n_max]
        .iter()
        .enumerate()
        .map(|(q, s)| {
            let w = weight(mode, q, epsilon)?;
            Ok(s.entries.iter().map(|e| e * &w).collect())
        })
        .collect::<Result<_>>()?;
    let inner: Vec<Vec<Complex64>> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let row = exact_row(n);
            (0..rows * cols)
                .map(|e| {
                    let mut acc = CRat::zero();
                    for (q, a) in row.iter().enumerate() {
                        let ar = BigRational::from_integer(a.clone());
                        acc = acc + &weighted[q][e] * CRat::new(ar, BigRational::zero());
                    }
                    to_c64(&acc)
                })
                .collect()
        })
        .collect();

    let mut sums = Vec::with_capacity(n_max + 1);
    let mut acc = CMat::zeros(rows, cols);
    for n in 0..=n_max {
        acc += CMat::from_column_slice(rows, cols, &inner[n]) * c[n];
        sums.push(&acc * prefactor);
    }
    Ok(sums)
}

pub fn interpolate_series_exact(
    samples: &[ExactMatrix],
    z: Complex64,
    n_max: usize,
    epsilon: &BigRational,
    mode: SeriesMode,
) -> Result<CMat> {
    Ok(partial_sums_exact(samples, z, n_max, epsilon, mode)?.pop().unwrap())
}

/// Partial sums with samples and `ε` taken at their exact binary values.
pub fn partial_sums(samples: &[CMat], z: Complex64, n_max: usize, epsilon: f64, mode: SeriesMode) -> Result<Vec<CMat>> {
    let ex = samples.iter().take(n_max + 1).map(ExactMatrix::from_cmat).collect::<Result<Vec<_>>>()?;
    partial_sums_exact(&ex, z, n_max, &exact(epsilon)?, mode)
}

pub fn interpolate_series(samples: &[CMat], z: Complex64, n_max: usize, epsilon: f64, mode: SeriesMode) -> Result<CMat> {
    Ok(partial_sums(samples, z, n_max, epsilon, mode)?.pop().unwrap())
}

/// Lattice points `i(q + ε)` (shifted by `z0`) where samples are expected.
pub fn lattice(n_max: usize, epsilon: f64, mode: SeriesMode) -> Vec<Complex64> {
    let z0 = match mode {
        SeriesMode::Shifted { z0 } => z0,
        _ => c64(0.0, 0.0),
    };
    (0..=n_max).map(|q| z0 + I * (q as f64 + epsilon)).collect()
}

/// Least-squares fit `error ≈ C N^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub log_constant: f64,
    /// `false` when the fitted exponent is not clearly negative.
    pub converging: bool,
}

/// Exponents above this are flagged as non-converging.
pub const CONVERGENCE_SLOPE: f64 = -0.1;

pub fn decay_estimate(errors: &[(usize, f64)]) -> Result<DecayFit> {
    if errors.len() < 4 {
        return Err(Error::Dimension(format!("need at least 4 points, got {}", errors.len())));
    }
    if let Some(&(n, e)) = errors.iter().find(|(n, e)| !(*e > 0.0) || *n == 0) {
        return Err(Error::Domain(format!("errors must be positive at N ≥ 1, got {e} at N = {n}")));
    }
    let pts: Vec<(f64, f64)> = errors.iter().map(|&(n, e)| ((n as f64).ln(), e.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("need at least two distinct N".into()));
    }
    let exponent = sxy / sxx;
    Ok(DecayFit { exponent, log_constant: my - exponent * mx, converging: exponent < CONVERGENCE_SLOPE })
}
