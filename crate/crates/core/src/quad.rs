//! Quadrature rules and an adaptive Runge-Kutta integrator for matrix-valued
//! functions.

use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMat};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss-Legendre rule: `panels` equal panels of `order` nodes.
pub fn composite_gl(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (t, w) = gauss_legendre(order);
    let width = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * order);
    let mut ws = Vec::with_capacity(panels * order);
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * width;
        for (ti, wi) in t.iter().zip(&w) {
            xs.push(mid + 0.5 * width * ti);
            ws.push(0.5 * width * wi);
        }
    }
    (xs, ws)
}

// Kronrod 15-point extension of the 7-point Gauss rule.
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> CMat>(f: &F, a: f64, b: f64) -> (CMat, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = &fc * num_complex::Complex64::new(GK_WEIGHTS[7], 0.0);
    let mut gauss = &fc * num_complex::Complex64::new(G7_WEIGHTS[3], 0.0);
    for k in 0..7 {
        let dx = h * GK_NODES[k];
        let s = f(c - dx) + f(c + dx);
        kron += &s * num_complex::Complex64::new(GK_WEIGHTS[k], 0.0);
        if k % 2 == 1 {
            gauss += &s * num_complex::Complex64::new(G7_WEIGHTS[k / 2], 0.0);
        }
    }
    let kron = kron * num_complex::Complex64::new(h, 0.0);
    let gauss = gauss * num_complex::Complex64::new(h, 0.0);
    let err = max_abs(&(&kron - &gauss));
    (kron, err)
}

/// Adaptive Gauss-Kronrod (7/15) integration of a matrix-valued function with
/// an absolute entrywise tolerance.
pub fn adaptive_gk<F: Fn(f64) -> CMat>(f: F, a: f64, b: f64, abs_tol: f64) -> CMat {
    if a == b {
        let probe = f(a);
        return CMat::zeros(probe.nrows(), probe.ncols());
    }
    let mut stack = vec![(a, b, 0usize)];
    let mut total: Option<CMat> = None;
    let len = (b - a).abs();
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        let local_tol = abs_tol * ((hi - lo).abs() / len).max(1e-6);
        if err <= local_tol || depth >= 40 {
            total = Some(match total {
                Some(t) => t + val,
                None => val,
            });
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    total.expect("at least one panel")
}

/// Adaptive Dormand-Prince 5(4) integrator for `y' = f(x, y)` with matrix
/// states.
#[derive(Debug, Clone, Copy)]
pub struct DormandPrince {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl DormandPrince {
    pub fn new(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, max_steps: 2_000_000 }
    }

    /// Integrates from `x0` to each of `targets` in turn (which must be
    /// monotone in the direction of integration) and returns the states there.
    pub fn integrate_to<F>(&self, f: F, x0: f64, y0: CMat, targets: &[f64]) -> Result<Vec<CMat>>
    where
        F: Fn(f64, &CMat) -> CMat,
    {
        let mut out = Vec::with_capacity(targets.len());
        let mut x = x0;
        let mut y = y0;
        let mut h: Option<f64> = None;
        let mut steps = 0usize;
        for &xt in targets {
            while (xt - x).abs() > 1e-14 * (1.0 + xt.abs()) {
                let dir = (xt - x).signum();
                let mut step = h.unwrap_or_else(|| 1e-3 * dir.abs().max(1e-3) * (xt - x).abs().max(1e-3));
                step = step.abs().min((xt - x).abs()) * dir;
                let (y_new, err) = self.step(&f, x, &y, step);
                let scale = self.atol + self.rtol * max_abs(&y).max(max_abs(&y_new));
                let ratio = err / scale;
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::Validation("ODE integrator exceeded step budget".into()));
                }
                if ratio <= 1.0 || step.abs() < 1e-14 {
                    x += step;
                    y = y_new;
                }
                let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
                h = Some(step.abs() * factor);
            }
            x = xt;
            out.push(y.clone());
        }
        Ok(out)
    }

    pub fn integrate<F>(&self, f: F, x0: f64, y0: CMat, x1: f64) -> Result<CMat>
    where
        F: Fn(f64, &CMat) -> CMat,
    {
        Ok(self.integrate_to(f, x0, y0, &[x1])?.pop().unwrap())
    }

    fn step<F>(&self, f: &F, x: f64, y: &CMat, h: f64) -> (CMat, f64)
    where
        F: Fn(f64, &CMat) -> CMat,
    {
        use num_complex::Complex64 as C;
        let r = |v: f64| C::new(v * h, 0.0);
        let k1 = f(x, y);
        let k2 = f(x + h / 5.0, &(y + &k1 * r(1.0 / 5.0)));
        let k3 = f(x + 3.0 * h / 10.0, &(y + &k1 * r(3.0 / 40.0) + &k2 * r(9.0 / 40.0)));
        let k4 = f(
            x + 4.0 * h / 5.0,
            &(y + &k1 * r(44.0 / 45.0) - &k2 * r(56.0 / 15.0) + &k3 * r(32.0 / 9.0)),
        );
        let k5 = f(
            x + 8.0 * h / 9.0,
            &(y + &k1 * r(19372.0 / 6561.0) - &k2 * r(25360.0 / 2187.0) + &k3 * r(64448.0 / 6561.0)
                - &k4 * r(212.0 / 729.0)),
        );
        let k6 = f(
            x + h,
            &(y + &k1 * r(9017.0 / 3168.0) - &k2 * r(355.0 / 33.0)
                + &k3 * r(46732.0 / 5247.0)
                + &k4 * r(49.0 / 176.0)
                - &k5 * r(5103.0 / 18656.0)),
        );
        let y5 = y + &k1 * r(35.0 / 384.0) + &k3 * r(500.0 / 1113.0) + &k4 * r(125.0 / 192.0)
            - &k5 * r(2187.0 / 6784.0)
            + &k6 * r(11.0 / 84.0);
        let k7 = f(x + h, &y5);
        let err = &k1 * r(71.0 / 57600.0) - &k3 * r(71.0 / 16695.0) + &k4 * r(71.0 / 1920.0)
            - &k5 * r(17253.0 / 339200.0)
            + &k6 * r(22.0 / 525.0)
            - &k7 * r(1.0 / 40.0);
        (y5, max_abs(&err))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // Degree 15 is the highest exact degree.
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((v - 2.0 / 15.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_gk_handles_oscillation() {
        let f = |x: f64| CMat::from_element(1, 1, c64(0.0, 30.0 * x).exp());
        let v = adaptive_gk(f, 0.0, 2.0, 1e-12);
        let exact = (c64(0.0, 60.0).exp() - 1.0) / c64(0.0, 30.0);
        assert!((v[(0, 0)] - exact).norm() < 1e-11);
    }

    #[test]
    fn dormand_prince_solves_linear_system() {
        let a = CMat::from_row_slice(2, 2, &[c64(0.0, 1.0), c64(1.0, 0.0), c64(-1.0, 0.0), c64(0.0, -0.5)]);
        let y0 = crate::linalg::identity(2);
        let y = DormandPrince::new(1e-11)
            .integrate(|_, y| &a * y, 0.0, y0, 1.5)
            .unwrap();
        let exact = (a * c64(1.5, 0.0)).exp();
        assert!(crate::linalg::fro(&(y - exact)) < 1e-8);
    }
}
