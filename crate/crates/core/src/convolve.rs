//! Dunkl translation operators, convolution of functions, and the shrinking
//! approximate identity.
//!
//! On the line the translation has an explicit integral form against the
//! probability measure `Phi_k(t) dt = c_k (1+t)(1-t^2)^{k-1} dt`:
//!
//! ```text
//! tau_y f(x) = int_{-1}^{1} [ (f(s) + f(-s))/2
//!                           + (x + y) * (f(s) - f(-s)) / (2 s) ] Phi_k(t) dt,
//! s = s(t) = sqrt(x^2 + y^2 + 2 x y t).
//! ```
//!
//! This is the algebraically equivalent stable form of the usual two-branch
//! formula: the difference quotient `(f(s) - f(-s)) / (2s)` is a smooth
//! function of `s^2`, and `s^2` is linear in `t`, so the integrand stays
//! analytic even at the coincidence `|x| = |y|` where the naive branches
//! blow up. The orientation (signs of `2xyt` and `x + y`) is pinned by the
//! requirements `tau_0 f = f`, `tau_y f(0) = f(y)`, `tau_y(id) = x + y`, and
//! the product formula `tau_y K(., z)(x) = K(x, z) K(y, z)`, all under test.
//!
//! For radial functions in any dimension the translation reduces to the
//! intertwining operator: `tau_y f(x) = V_k[f_0(sqrt(|x|^2 + |y|^2 +
//! 2<x, .>))](y)`.

use num_complex::Complex64;

use crate::error::{DunklError, Result};
use crate::foundation::config::GroupConfig;
use crate::foundation::quad::{halfline_power_rule, jacobi_type_prefactor, ProductRule};
use crate::intertwine::vk_apply_impl;
use crate::transform::{Decay, RadialProfile, SampledFunction};

/// A compactly supported radial bump built from the prototype
/// `exp(-1 / (1 - (r/a)^2))` inside the ball of radius `a`, zero outside.
#[derive(Debug, Clone, Copy)]
pub struct BumpFunction {
    radius: f64,
}

impl BumpFunction {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(DunklError::InvalidArgument(
                "bump radius must be positive and finite".into(),
            ));
        }
        Ok(BumpFunction { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Un-normalized prototype profile value at radius `r`.
    pub fn prototype(&self, r: f64) -> f64 {
        let q = r / self.radius;
        if q.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - q * q)).exp()
        }
    }

    /// Mass of the prototype against the reflection-invariant measure.
    pub fn prototype_mass(&self, config: &GroupConfig) -> Result<f64> {
        let rule = ProductRule::dunkl_box(config.multiplicities(), self.radius, 48)?;
        Ok(rule.integrate(|x| {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            self.prototype(r)
        }))
    }

    /// The bump normalized to unit mass against `w_k`, as a d-dimensional
    /// sampled function.
    pub fn normalized_mass(&self, config: &GroupConfig) -> Result<SampledFunction> {
        let mass = self.prototype_mass(config)?;
        if !(mass > 0.0) {
            return Err(DunklError::Internal("bump mass must be positive".into()));
        }
        let bump = *self;
        let amplitude = (-1.0_f64).exp() / mass;
        SampledFunction::new(
            config.dimension(),
            Decay::CompactSupport {
                radius: self.radius,
                amplitude: amplitude * 1.0000001,
            },
            self.radius,
            move |x: &[f64]| {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                bump.prototype(r) / mass
            },
        )
    }

    /// Radial profile of the unit-mass bump.
    pub fn normalized_mass_profile(&self, config: &GroupConfig) -> Result<RadialProfile> {
        let mass = self.prototype_mass(config)?;
        let bump = *self;
        Ok(RadialProfile::new(
            Decay::CompactSupport {
                radius: self.radius,
                amplitude: (-1.0_f64).exp() / mass * 1.0000001,
            },
            self.radius,
            move |r| bump.prototype(r) / mass,
        ))
    }

    /// The bump normalized so that it equals 1 at the origin (the
    /// normalization the symbol lower-bound check uses).
    pub fn normalized_peak(&self, dimension: usize) -> Result<SampledFunction> {
        let bump = *self;
        let peak = self.prototype(0.0);
        SampledFunction::new(
            dimension,
            Decay::CompactSupport {
                radius: self.radius,
                amplitude: 1.0000001,
            },
            self.radius,
            move |x: &[f64]| {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                bump.prototype(r) / peak
            },
        )
    }
}

/// Dunkl translation on the line, `tau_y f` evaluated at `x`.
pub fn translate_1d(k: f64, y: f64, f: &SampledFunction, x: f64) -> Result<f64> {
    translate_1d_with(k, y, f, x, 64)
}

pub fn translate_1d_with(k: f64, y: f64, f: &SampledFunction, x: f64, nodes: usize) -> Result<f64> {
    if f.dimension() != 1 {
        return Err(DunklError::InvalidArgument(
            "translate_1d needs a one-dimensional function".into(),
        ));
    }
    let value = translate_1d_fn(k, y, |t| Complex64::new(f.eval(&[t]), 0.0), x, nodes)?;
    Ok(value.re)
}

/// Translation of an arbitrary continuous (complex-valued) function given as
/// a closure. This is the general form behind `translate_1d`; it carries no
/// decay requirement because the integration region is compact.
pub fn translate_1d_fn<F>(
    k: f64,
    y: f64,
    f: F,
    x: f64,
    nodes: usize,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(k > 0.0) {
        return Err(DunklError::InvalidArgument(
            "translation requires k > 0".into(),
        ));
    }
    let rule = crate::foundation::quad::jacobi_type_rule_cached(k, nodes)?;
    let c = jacobi_type_prefactor(k);
    let shift = x + y;
    let two_xy = 2.0 * x * y;
    let sq = x * x + y * y;
    let value = rule.integrate_complex(|t| {
        let s2 = (sq + two_xy * t).max(0.0);
        let s = s2.sqrt();
        let (even, diff_quot) = if s > 1e-7 {
            let fp = f(s);
            let fm = f(-s);
            (0.5 * (fp + fm), (fp - fm) / (2.0 * s))
        } else {
            // difference quotient -> f'(0); a symmetric step keeps the
            // evaluation inside the stable regime
            let h = 1e-6;
            let fp = f(h);
            let fm = f(-h);
            (0.5 * (f(s) + f(-s)), (fp - fm) / (2.0 * h))
        };
        even + shift * diff_quot
    });
    Ok(c * value)
}

/// Radial translation in any dimension:
/// `tau_y f(x) = V_k[f_0(sqrt(|x|^2 + |y|^2 + 2 <x, .>))](y)`.
///
/// The integration points `u` run over the orbit hull of `y`, where
/// `|u| <= |y|`, so the radicand is at least `(|x| - |y|)^2 >= 0`; values
/// below `-1e-12` indicate a broken quadrature and are an error.
pub fn translate_radial(
    config: &GroupConfig,
    y: &[f64],
    f0: &RadialProfile,
    x: &[f64],
) -> Result<f64> {
    translate_radial_with(config, y, f0, x, 64)
}

pub fn translate_radial_with(
    config: &GroupConfig,
    y: &[f64],
    f0: &RadialProfile,
    x: &[f64],
    nodes: usize,
) -> Result<f64> {
    let d = config.dimension();
    if x.len() != d || y.len() != d {
        return Err(DunklError::InvalidArgument("point dimension mismatch".into()));
    }
    let x_sq: f64 = x.iter().map(|v| v * v).sum();
    let y_sq: f64 = y.iter().map(|v| v * v).sum();
    let bad_radicand = std::cell::Cell::new(0.0_f64);
    let value = vk_apply_impl(
        config,
        |u: &[f64]| {
            let dot: f64 = x.iter().zip(u).map(|(a, b)| a * b).sum();
            let radicand = x_sq + y_sq + 2.0 * dot;
            if radicand < -1e-12 {
                bad_radicand.set(radicand);
                return 0.0;
            }
            f0.eval(radicand.max(0.0).sqrt())
        },
        y,
        nodes,
    )?;
    if bad_radicand.get() < 0.0 {
        return Err(DunklError::Internal(format!(
            "negative radicand {:e} in radial translation",
            bad_radicand.get()
        )));
    }
    Ok(value)
}

/// Dunkl convolution of two functions on the line at a point:
/// `f *_D g (x) = int tau_x f(-y) g(y) w_k(y) dy`.
pub fn dunkl_convolve(
    config: &GroupConfig,
    f: &SampledFunction,
    g: &SampledFunction,
    x: &[f64],
    tol: f64,
) -> Result<f64> {
    dunkl_convolve_with(config, f, g, x, tol, 96, 64)
}

pub fn dunkl_convolve_with(
    config: &GroupConfig,
    f: &SampledFunction,
    g: &SampledFunction,
    x: &[f64],
    tol: f64,
    outer_nodes: usize,
    translate_nodes: usize,
) -> Result<f64> {
    if config.dimension() != 1 {
        return Err(DunklError::Unsupported(
            "general (non-radial) convolution has an explicit translation only on the line; \
             use dunkl_convolve_radial for d >= 2"
                .into(),
        ));
    }
    if f.dimension() != 1 || g.dimension() != 1 || x.len() != 1 {
        return Err(DunklError::InvalidArgument("dimension mismatch".into()));
    }
    let k = config.multiplicities()[0];
    let tail = convolution_tail_bound(config, f, g, x);
    if !(tail <= tol) {
        return Err(DunklError::TailBound {
            bound: tail,
            tolerance: tol,
        });
    }
    let rule = halfline_power_rule(2.0 * k, g.box_halfwidth(), outer_nodes)?;
    let mut sum = 0.0;
    for (&ynode, &w) in rule.nodes.iter().zip(&rule.weights) {
        let plus = translate_1d_with(k, x[0], f, -ynode, translate_nodes)?;
        let minus = translate_1d_with(k, x[0], f, ynode, translate_nodes)?;
        sum += w * (plus * g.eval(&[ynode]) + minus * g.eval(&[-ynode]));
    }
    Ok(sum)
}

/// Dunkl convolution with a radial first factor, valid in every dimension.
pub fn dunkl_convolve_radial(
    config: &GroupConfig,
    f0: &RadialProfile,
    g: &SampledFunction,
    x: &[f64],
    tol: f64,
) -> Result<f64> {
    dunkl_convolve_radial_with(config, f0, g, x, tol, 48, 48)
}

pub fn dunkl_convolve_radial_with(
    config: &GroupConfig,
    f0: &RadialProfile,
    g: &SampledFunction,
    x: &[f64],
    tol: f64,
    outer_nodes: usize,
    vk_nodes: usize,
) -> Result<f64> {
    let d = config.dimension();
    if g.dimension() != d || x.len() != d {
        return Err(DunklError::InvalidArgument("dimension mismatch".into()));
    }
    let lifted = f0.lift(d)?;
    let tail = convolution_tail_bound(config, &lifted, g, x);
    if !(tail <= tol) {
        return Err(DunklError::TailBound {
            bound: tail,
            tolerance: tol,
        });
    }
    let rule = ProductRule::dunkl_box(config.multiplicities(), g.box_halfwidth(), outer_nodes)?;
    let mut sum = 0.0;
    let mut minus_y = vec![0.0; d];
    let mut err: Option<DunklError> = None;
    rule.for_each_node(|y, w| {
        if err.is_some() {
            return;
        }
        for (slot, &v) in minus_y.iter_mut().zip(y) {
            *slot = -v;
        }
        match translate_radial_with(config, x, f0, &minus_y, vk_nodes) {
            Ok(t) => sum += w * t * g.eval(y),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(sum),
    }
}

/// Crude but honest bound for the neglected integrand mass outside `g`'s
/// box: the translated factor grows at most linearly through the difference
/// quotient, which is absorbed into the envelope constants.
fn convolution_tail_bound(
    config: &GroupConfig,
    f: &SampledFunction,
    g: &SampledFunction,
    x: &[f64],
) -> f64 {
    let amp_f = f.decay().envelope(0.0);
    let x_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let reach = 1.0 + x_norm + g.box_halfwidth();
    amp_f * reach * g.weighted_tail_bound(config)
}

/// The shrinking approximate identity `phi_eps(x) = eps^{-(2 gamma + d)}
/// phi(|x| / eps)` built from the unit-radius, unit-mass bump. Homogeneity
/// of the weight makes the mass scale-invariant; the constructor verifies it
/// to 1e-8 by quadrature.
pub fn approx_identity(config: &GroupConfig, epsilon: f64) -> Result<SampledFunction> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(DunklError::InvalidArgument(
            "epsilon must lie in (0, 1]".into(),
        ));
    }
    let d = config.dimension();
    let bump = BumpFunction::new(1.0)?;
    let mass = bump.prototype_mass(config)?;
    let scale = epsilon.powf(-(2.0 * config.gamma() + d as f64));
    let amplitude = scale * (-1.0_f64).exp() / mass;
    let phi = SampledFunction::new(
        d,
        Decay::CompactSupport {
            radius: epsilon,
            amplitude: amplitude * 1.0000001,
        },
        epsilon,
        move |xp: &[f64]| {
            let r = xp.iter().map(|v| v * v).sum::<f64>().sqrt();
            scale * bump.prototype(r / epsilon) / mass
        },
    )?;
    // the rule's weights already carry w_k, so integrate the bare values
    let rule = ProductRule::dunkl_box(config.multiplicities(), epsilon, 48)?;
    let phi_mass = rule.integrate(|p| phi.eval(p));
    if (phi_mass - 1.0).abs() > 1e-8 {
        return Err(DunklError::Internal(format!(
            "approximate identity mass {phi_mass} deviates from 1"
        )));
    }
    Ok(phi)
}
