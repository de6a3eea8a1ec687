//! Recovery of `β = [β1  β2]` from the continuous Schur coefficient
//! `ρ = β2⁻¹β1` by integrating `β2' = −β2 ρ'(ρ + ρ*)⁻¹`, `β2(0) = I`.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::linalg::{c64, identity, min_hermitian_eigenvalue, solve, CMat};
use crate::quad::DormandPrince;

/// Derivative of grid data: central differences inside, second-order one-sided
/// differences at the ends.
pub fn grid_derivative(g: &GridFunction) -> Vec<CMat> {
    let n = g.len();
    let h = g.h;
    let v = &g.values;
    (0..n)
        .map(|k| {
            if n < 3 {
                return if n == 2 {
                    (&v[1] - &v[0]) * c64(1.0 / h, 0.0)
                } else {
                    CMat::zeros(g.rows, g.cols)
                };
            }
            if k == 0 {
                (&v[1] * c64(4.0, 0.0) - &v[0] * c64(3.0, 0.0) - &v[2]) * c64(0.5 / h, 0.0)
            } else if k == n - 1 {
                (&v[n - 1] * c64(3.0, 0.0) - &v[n - 2] * c64(4.0, 0.0) + &v[n - 3]) * c64(0.5 / h, 0.0)
            } else {
                (&v[k + 1] - &v[k - 1]) * c64(0.5 / h, 0.0)
            }
        })
        .collect()
}

/// `(β1, β2)` on the grid of `rho`, which must start at `x = 0`.
pub fn schur_recover(rho: &GridFunction) -> Result<(GridFunction, GridFunction)> {
    let p = rho.rows;
    if rho.cols != p {
        return Err(Error::Dimension("the Schur coefficient must be square".into()));
    }
    if rho.x0.abs() > 1e-12 {
        return Err(Error::Dimension(format!("the grid must start at x = 0, not {}", rho.x0)));
    }
    if rho.len() < 2 {
        return Err(Error::Dimension("need at least two grid points".into()));
    }
    for (k, r) in rho.values.iter().enumerate() {
        let re = (r + r.adjoint()) * c64(0.5, 0.0);
        if !(min_hermitian_eigenvalue(&re) > 0.0) {
            return Err(Error::Domain(format!("Re rho is not positive definite at x = {}", rho.x(k))));
        }
    }
    let drho = GridFunction { values: grid_derivative(rho), ..rho.clone() };
    let rhs = |x: f64, b2: &CMat| -> CMat {
        let r = rho.interpolate(x);
        let dr = drho.interpolate(x);
        let sum = &r + r.adjoint();
        // ρ'(ρ + ρ*)⁻¹ = ((ρ + ρ*)⁻¹ ρ'*)* because ρ + ρ* is Hermitian.
        let m = solve(&sum, &dr.adjoint()).expect("Re rho > 0").adjoint();
        -(b2 * m)
    };
    let xs = rho.xs();
    let beta2 = DormandPrince::new(1e-8).integrate_to(rhs, 0.0, identity(p), &xs[1..])?;
    let mut beta2_vals = Vec::with_capacity(xs.len());
    beta2_vals.push(identity(p));
    beta2_vals.extend(beta2);
    let beta1_vals: Vec<CMat> = beta2_vals.iter().zip(&rho.values).map(|(b2, r)| b2 * r).collect();
    Ok((
        GridFunction { values: beta1_vals, ..rho.clone() },
        GridFunction { values: beta2_vals, ..rho.clone() },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fro;

    #[test]
    fn identity_coefficient_gives_free_beta() {
        let rho = GridFunction::from_fn(2, 2, 0.0, 0.1, 11, |_| identity(2));
        let (b1, b2) = schur_recover(&rho).unwrap();
        for (a, b) in b1.values.iter().zip(&b2.values) {
            assert!(fro(&(a - identity(2))) < 1e-14 && fro(&(b - identity(2))) < 1e-14);
        }
    }

    #[test]
    fn loss_of_positivity_is_a_domain_error() {
        let rho = GridFunction::from_fn(1, 1, 0.0, 0.1, 11, |x| CMat::from_element(1, 1, c64(0.5 - x, 0.0)));
        match schur_recover(&rho) {
            Err(Error::Domain(msg)) => assert!(msg.contains("x = 0.5")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn derivative_is_exact_for_quadratics() {
        let g = GridFunction::from_fn(1, 1, 0.0, 0.1, 6, |x| CMat::from_element(1, 1, c64(x * x, x)));
        for (k, d) in grid_derivative(&g).iter().enumerate() {
            let x = g.x(k);
            assert!((d[(0, 0)] - c64(2.0 * x, 1.0)).norm() < 1e-12);
        }
    }
}
