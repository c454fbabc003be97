//! The Dunkl kernel `K(x, z)` for the sign-flip groups, evaluated by two
//! independent routes that cross-check each other:
//!
//! * series route (d = 1, gamma = k):
//!   `K(x, z) = j_{g-1/2}(ixz) + (xz / (2g+1)) j_{g+1/2}(ixz)`,
//! * Laplace-type integral route:
//!   `K(x, z) = c_g int_{-1}^{1} e^{t x z} (1-t^2)^{g-1} (1+t) dt`,
//!   with `c_g = Gamma(g+1/2) / (sqrt(pi) Gamma(g))`,
//!
//! and the coordinate-wise product for Z2 x ... x Z2. `K` is the joint
//! eigenfunction of the Dunkl operators: `T_j K(., z)(x) = z_j K(x, z)` with
//! `K(0, z) = 1`, which `kernel_eigen_check` verifies numerically.

use num_complex::Complex64;

use crate::error::{DunklError, Result};
use crate::foundation::config::GroupConfig;
use crate::foundation::quad::jacobi_type_prefactor;
use crate::foundation::special::normalized_bessel_with_error;

/// Which evaluation path produced a kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelRoute {
    Series,
    IntegralRep,
    Product,
}

impl KernelRoute {
    pub fn as_str(&self) -> &'static str {
        match self {
            KernelRoute::Series => "series",
            KernelRoute::IntegralRep => "integral",
            KernelRoute::Product => "product",
        }
    }
}

/// A kernel value with its provenance and an absolute error estimate.
#[derive(Debug, Clone, Copy)]
pub struct KernelValue {
    pub value: Complex64,
    pub route: KernelRoute,
    pub est_error: f64,
}

/// Largest |z| accepted by the integral route; beyond it the oscillatory /
/// growing integrand is too ill-conditioned for a fixed refinement ladder.
pub const INTEGRAL_ROUTE_MAX_Z: f64 = 50.0;

/// One-dimensional kernel by the two-Bessel-term series formula.
///
/// Accepts `k >= 0`; at `k = 0` the formula collapses to `exp(xz)`.
/// `K(x, 0) = 1` exactly and the value depends on `(x, z)` only through the
/// product `xz`, which gives the symmetry and rescaling identities for free.
pub fn kernel_1d(k: f64, x: f64, z: Complex64) -> KernelValue {
    assert!(k >= 0.0 && k.is_finite(), "multiplicity must be >= 0");
    let gamma = k;
    let xz = z * x;
    let arg = Complex64::new(0.0, 1.0) * xz;
    let (j_minus, err_minus) = normalized_bessel_with_error(gamma - 0.5, arg);
    let (j_plus, err_plus) = normalized_bessel_with_error(gamma + 0.5, arg);
    let scale = xz / (2.0 * gamma + 1.0);
    let value = j_minus + scale * j_plus;
    let est_error = err_minus + scale.norm() * err_plus + 4.0 * f64::EPSILON * value.norm();
    KernelValue {
        value,
        route: KernelRoute::Series,
        est_error,
    }
}

/// One-dimensional kernel by quadrature of the Laplace-type representation,
/// refined until two successive rules agree. Requires `k > 0` (the endpoint
/// weight is not integrable at k = 0) and `|z| <= INTEGRAL_ROUTE_MAX_Z`.
pub fn kernel_1d_integral(k: f64, x: f64, z: Complex64) -> Result<KernelValue> {
    kernel_1d_integral_with(k, x, z, 1e-11, 32, 5)
}

pub fn kernel_1d_integral_with(
    k: f64,
    x: f64,
    z: Complex64,
    rel_tol: f64,
    initial_nodes: usize,
    max_doublings: usize,
) -> Result<KernelValue> {
    if !(k > 0.0) {
        return Err(DunklError::InvalidArgument(
            "the integral route requires k > 0".into(),
        ));
    }
    if z.norm() > INTEGRAL_ROUTE_MAX_Z {
        return Err(DunklError::InvalidArgument(format!(
            "|z| = {} exceeds the integral-route bound {INTEGRAL_ROUTE_MAX_Z}",
            z.norm()
        )));
    }
    let prefactor = jacobi_type_prefactor(k);
    let xz = z * x;
    let eval = |n: usize| -> Result<Complex64> {
        let rule = crate::foundation::quad::jacobi_type_rule_cached(k, n)?;
        Ok(prefactor * rule.integrate_complex(|t| (xz * t).exp()))
    };
    let mut n = initial_nodes;
    let mut previous = eval(n)?;
    for _ in 0..max_doublings {
        n *= 2;
        let current = eval(n)?;
        let delta = (current - previous).norm();
        let scale = current.norm().max(1.0);
        if delta <= rel_tol * scale {
            return Ok(KernelValue {
                value: current,
                route: KernelRoute::IntegralRep,
                est_error: delta + 4.0 * f64::EPSILON * current.norm(),
            });
        }
        previous = current;
    }
    Err(DunklError::QuadratureNonConvergence {
        estimate: f64::NAN,
        tolerance: rel_tol,
    })
}

/// Kernel for the product group: `K(x, z) = prod_j K_{k_j}(x_j, z_j)`.
/// A rank-1 configuration is the one-factor product.
pub fn kernel_product(config: &GroupConfig, x: &[f64], z: &[Complex64]) -> KernelValue {
    let d = config.dimension();
    assert_eq!(x.len(), d, "point dimension mismatch");
    assert_eq!(z.len(), d, "spectral dimension mismatch");
    let factors: Vec<KernelValue> = config
        .multiplicities()
        .iter()
        .zip(x.iter().zip(z))
        .map(|(&k, (&xj, &zj))| kernel_1d(k, xj, zj))
        .collect();
    let value: Complex64 = factors.iter().map(|f| f.value).product();
    // first-order error propagation through the product
    let mut est_error = 4.0 * f64::EPSILON * value.norm();
    for j in 0..d {
        let others: f64 = factors
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, f)| f.value.norm())
            .product();
        est_error += factors[j].est_error * others;
    }
    KernelValue {
        value,
        route: KernelRoute::Product,
        est_error,
    }
}

/// Residual of the eigen-equation `T_j K(., z)(x) = z_j K(x, z)` per
/// coordinate. The derivative part of `T_j` uses Richardson-extrapolated
/// central differences with step `h`; the reflection part is evaluated
/// exactly. Near `x_j = 0` the difference quotient is replaced by its
/// analytic limit `2 d_j f(x)` (removable singularity).
pub fn kernel_eigen_check(
    config: &GroupConfig,
    z: &[Complex64],
    x: &[f64],
    h: f64,
) -> Result<Vec<f64>> {
    if !(1e-6..=1e-2).contains(&h) {
        return Err(DunklError::InvalidArgument(format!(
            "finite-difference step {h} outside [1e-6, 1e-2]"
        )));
    }
    let d = config.dimension();
    let ks = config.multiplicities();
    let eval = |point: &[f64]| kernel_product(config, point, z).value;
    let center = eval(x);
    let mut residuals = Vec::with_capacity(d);
    for j in 0..d {
        let derivative = {
            let diff = |step: f64| {
                let mut plus = x.to_vec();
                let mut minus = x.to_vec();
                plus[j] += step;
                minus[j] -= step;
                (eval(&plus) - eval(&minus)) / (2.0 * step)
            };
            // Richardson: (4 D(h/2) - D(h)) / 3, O(h^4)
            (4.0 * diff(h / 2.0) - diff(h)) / 3.0
        };
        let reflection = if x[j].abs() < 1e-8 {
            // limit of (f(x) - f(sigma_j x)) / x_j as x_j -> 0
            let mut plus = x.to_vec();
            let mut minus = x.to_vec();
            plus[j] = h;
            minus[j] = -h;
            2.0 * (eval(&plus) - eval(&minus)) / (2.0 * h)
        } else {
            let mut reflected = x.to_vec();
            reflected[j] = -reflected[j];
            (center - eval(&reflected)) / x[j]
        };
        let t_j = derivative + ks[j] * reflection;
        residuals.push((t_j - z[j] * center).norm());
    }
    Ok(residuals)
}
