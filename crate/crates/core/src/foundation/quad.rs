//! Quadrature rules: Gauss-Legendre, Gauss-Jacobi, and the weighted rules
//! every integral in the crate routes through.
//!
//! The measure `|x|^{2k} dx` on a symmetric box and the kernel-side measure
//! `(1-t^2)^{gamma-1}(1+t) dt` on [-1, 1] are both Jacobi weights after a
//! linear change of variables, so a single Golub-Welsch construction covers
//! all endpoint-singular cases exactly. Gauss-Legendre is built separately by
//! Newton iteration on the Legendre recurrence, which gives an independent
//! cross-check of the Jacobi path at `alpha = beta = 0`.

use num_complex::Complex64;

use crate::error::{DunklError, Result};
use crate::foundation::special::gamma;

/// A one-dimensional quadrature rule. `weights` include the weight function
/// of the underlying measure, so plain dot products against integrand values
/// approximate the weighted integral over `interval`.
#[derive(Debug, Clone)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
    /// Polynomials of this degree (against the rule's measure) integrate exactly.
    pub exactness_degree: usize,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let y = w * f(x) - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }

    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(x);
        }
        sum
    }
}

/// Gauss-Legendre rule with `n` nodes mapped to `interval`; exact for
/// polynomials of degree `2n - 1`.
pub fn gauss_rule(n: usize, interval: (f64, f64)) -> Result<QuadRule> {
    if n == 0 {
        return Err(DunklError::InvalidArgument(
            "a quadrature rule needs at least one node".into(),
        ));
    }
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(DunklError::InvalidArgument(format!(
            "bad interval [{a}, {b}]"
        )));
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes.push(x);
        weights.push(w);
    }
    nodes.reverse();
    weights.reverse();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let nodes = nodes.iter().map(|t| mid + half * t).collect();
    let weights = weights.iter().map(|w| half * w).collect();
    Ok(QuadRule {
        nodes,
        weights,
        interval,
        exactness_degree: 2 * n - 1,
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Jacobi rule on [-1, 1]: `sum w_i f(x_i) ~ int f(t) (1-t)^alpha (1+t)^beta dt`.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<QuadRule> {
    if n == 0 {
        return Err(DunklError::InvalidArgument(
            "a quadrature rule needs at least one node".into(),
        ));
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(DunklError::InvalidArgument(format!(
            "Jacobi exponents must exceed -1, got alpha={alpha}, beta={beta}"
        )));
    }
    // Jacobi matrix of the monic three-term recurrence (Golub-Welsch).
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n);
    let s = alpha + beta;
    for idx in 0..n {
        let i = idx as f64;
        let denom = 2.0 * i + s;
        let d = if idx == 0 {
            (beta - alpha) / (s + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (denom * (denom + 2.0))
        };
        diag.push(d);
        if idx + 1 < n {
            let ip = i + 1.0;
            let denom_p = 2.0 * ip + s;
            let b2 = if idx == 0 {
                4.0 * (alpha + 1.0) * (beta + 1.0) / ((s + 2.0) * (s + 2.0) * (s + 3.0))
            } else {
                4.0 * ip * (ip + alpha) * (ip + beta) * (ip + s)
                    / (denom_p * denom_p * (denom_p + 1.0) * (denom_p - 1.0))
            };
            off.push(b2.sqrt());
        }
    }
    off.push(0.0);
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiagonal_eigen(&mut diag, &mut off, &mut first)?;

    let mu0 = 2.0_f64.powf(s + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0) / gamma(s + 2.0);
    let mut pairs: Vec<(f64, f64)> = diag
        .iter()
        .zip(&first)
        .map(|(&x, &z)| (x, mu0 * z * z))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(QuadRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        interval: (-1.0, 1.0),
        exactness_degree: 2 * n - 1,
    })
}

/// Implicit-shift QL for a symmetric tridiagonal matrix, accumulating only
/// the first row of the eigenvector matrix (all Golub-Welsch needs).
fn tridiagonal_eigen(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 50 {
                return Err(DunklError::Internal(
                    "tridiagonal QL failed to converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.abs().copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if r == 0.0 && m > l + 1 {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Rule for the kernel-side measure `(1-t^2)^{gamma-1}(1+t) dt` on [-1, 1],
/// i.e. Gauss-Jacobi with exponents `(gamma-1, gamma)`. Its total mass is
/// `sqrt(pi) Gamma(gamma) / Gamma(gamma + 1/2)`, so multiplying by
/// `Gamma(gamma + 1/2) / (sqrt(pi) Gamma(gamma))` normalizes it to a
/// probability measure.
pub fn jacobi_type_rule(gamma_param: f64, n: usize) -> Result<QuadRule> {
    if !(gamma_param > 0.0) {
        return Err(DunklError::InvalidArgument(format!(
            "jacobi_type_rule requires gamma > 0, got {gamma_param}"
        )));
    }
    gauss_jacobi(n, gamma_param - 1.0, gamma_param)
}

/// Shared-cache variant of `jacobi_type_rule`. Rule construction is an
/// eigendecomposition; translation and kernel loops request the same
/// (gamma, n) pair millions of times.
pub fn jacobi_type_rule_cached(gamma_param: f64, n: usize) -> Result<std::sync::Arc<QuadRule>> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    type RuleCache = Mutex<HashMap<(u64, usize), Arc<QuadRule>>>;
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let key = (gamma_param.to_bits(), n);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(jacobi_type_rule(gamma_param, n)?);
    cache.lock().unwrap().insert(key, rule.clone());
    Ok(rule)
}

/// Normalizing constant `Gamma(gamma + 1/2) / (sqrt(pi) Gamma(gamma))` that
/// turns the `jacobi_type_rule` measure into a probability measure.
pub fn jacobi_type_prefactor(gamma_param: f64) -> f64 {
    gamma(gamma_param + 0.5) / (std::f64::consts::PI.sqrt() * gamma(gamma_param))
}

/// Rule for `int_a^b f(x) (b-x)^{alpha_at_b} (x-a)^{beta_at_a} dx` with
/// algebraic endpoint factors folded into the weights.
pub fn mapped_jacobi_rule(
    a: f64,
    b: f64,
    alpha_at_b: f64,
    beta_at_a: f64,
    n: usize,
) -> Result<QuadRule> {
    if !(b > a) {
        return Err(DunklError::InvalidArgument(format!(
            "bad interval [{a}, {b}]"
        )));
    }
    let base = gauss_jacobi(n, alpha_at_b, beta_at_a)?;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let scale = half.powf(alpha_at_b + beta_at_a + 1.0);
    Ok(QuadRule {
        nodes: base.nodes.iter().map(|t| mid + half * t).collect(),
        weights: base.weights.iter().map(|w| scale * w).collect(),
        interval: (a, b),
        exactness_degree: base.exactness_degree,
    })
}

/// Rule for the half-line piece of the reflection-invariant measure:
/// `int_0^L f(x) x^{two_k} dx`.
pub fn halfline_power_rule(two_k: f64, upper: f64, n: usize) -> Result<QuadRule> {
    if two_k < 0.0 {
        return Err(DunklError::InvalidArgument(
            "the power weight exponent must be nonnegative".into(),
        ));
    }
    mapped_jacobi_rule(0.0, upper, 0.0, two_k, n)
}

/// Tensor-product rule over a box, one weighted axis per coordinate.
/// Summation order is fixed (row-major over ascending nodes), so results are
/// deterministic and safe to compare byte-for-byte across runs.
#[derive(Debug, Clone)]
pub struct ProductRule {
    axes: Vec<(Vec<f64>, Vec<f64>)>,
}

impl ProductRule {
    pub fn from_rules(rules: Vec<QuadRule>) -> Self {
        ProductRule {
            axes: rules.into_iter().map(|r| (r.nodes, r.weights)).collect(),
        }
    }

    /// Box rule for `int_{[-L,L]^d} f(x) prod_j |x_j|^{2 k_j} dx`, built by
    /// symmetrizing a half-line Jacobi rule on each axis.
    pub fn dunkl_box(multiplicities: &[f64], halfwidth: f64, n_per_half: usize) -> Result<Self> {
        let mut axes = Vec::with_capacity(multiplicities.len());
        for &k in multiplicities {
            let half = halfline_power_rule(2.0 * k, halfwidth, n_per_half)?;
            let mut nodes = Vec::with_capacity(2 * half.len());
            let mut weights = Vec::with_capacity(2 * half.len());
            for (&x, &w) in half.nodes.iter().rev().zip(half.weights.iter().rev()) {
                nodes.push(-x);
                weights.push(w);
            }
            for (&x, &w) in half.nodes.iter().zip(&half.weights) {
                nodes.push(x);
                weights.push(w);
            }
            axes.push((nodes, weights));
        }
        Ok(ProductRule { axes })
    }

    /// Plain (unweighted) Gauss-Legendre box rule.
    pub fn legendre_box(dimension: usize, halfwidth: f64, n: usize) -> Result<Self> {
        let rule = gauss_rule(n, (-halfwidth, halfwidth))?;
        Ok(ProductRule {
            axes: vec![(rule.nodes, rule.weights); dimension],
        })
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn axis_nodes(&self, j: usize) -> &[f64] {
        &self.axes[j].0
    }

    pub fn axis_weights(&self, j: usize) -> &[f64] {
        &self.axes[j].1
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(|(n, _)| n.len()).product()
    }

    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        self.for_each_node(|x, w| {
            let y = w * f(x) - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        });
        sum
    }

    pub fn integrate_complex<F: Fn(&[f64]) -> Complex64>(&self, f: F) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        self.for_each_node(|x, w| sum += w * f(x));
        sum
    }

    /// Visit every tensor node in a fixed order with its combined weight.
    pub fn for_each_node<F: FnMut(&[f64], f64)>(&self, mut visit: F) {
        self.for_each_node_indexed(|_, x, w| visit(x, w));
    }

    /// Same, also exposing the per-axis node indices (for callers that cache
    /// per-axis factor values).
    pub fn for_each_node_indexed<F: FnMut(&[usize], &[f64], f64)>(&self, mut visit: F) {
        let d = self.axes.len();
        let mut idx = vec![0usize; d];
        let mut point = vec![0.0; d];
        'outer: loop {
            let mut w = 1.0;
            for j in 0..d {
                point[j] = self.axes[j].0[idx[j]];
                w *= self.axes[j].1[idx[j]];
            }
            visit(&idx, &point, w);
            // odometer increment
            let mut j = d;
            loop {
                if j == 0 {
                    break 'outer;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < self.axes[j].0.len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }
}
