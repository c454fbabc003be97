//! Named test-function registry, so runs are specifiable from the command
//! line without code changes.
//!
//! Recognized names:
//! * `gaussian` — `exp(-|x|^2 / 2)`
//! * `hermite1xgaussian` (also `hermite1×gaussian`) — `x_1 exp(-|x|^2 / 2)`
//! * `bump:a=R` — the smooth bump of radius `R`, normalized to unit
//!   `w_k`-mass for the active configuration
//! * `exp:z=c1,c2,...` — `exp(<x, z>)` with real `z` (compact-integration
//!   uses only; no decay)

use dunkl_core::convolve::BumpFunction;
use dunkl_core::foundation::config::GroupConfig;
use dunkl_core::transform::{Decay, RadialProfile, SampledFunction};
use dunkl_core::{DunklError, Result};

pub struct NamedFunction {
    pub sampled: SampledFunction,
    /// present when the function is radial, enabling the radial translation
    /// and convolution routes in d >= 2
    pub radial: Option<RadialProfile>,
}

pub fn lookup(name: &str, config: &GroupConfig) -> Result<NamedFunction> {
    let d = config.dimension();
    let name = name.trim();
    if name == "gaussian" {
        return Ok(NamedFunction {
            sampled: SampledFunction::gaussian(d),
            radial: Some(RadialProfile::gaussian()),
        });
    }
    if name == "hermite1xgaussian" || name == "hermite1\u{d7}gaussian" {
        return Ok(NamedFunction {
            sampled: SampledFunction::hermite1_gaussian(d),
            radial: None,
        });
    }
    if let Some(rest) = name.strip_prefix("bump:a=") {
        let radius: f64 = rest
            .parse()
            .map_err(|e| DunklError::InvalidArgument(format!("bad bump radius: {e}")))?;
        let bump = BumpFunction::new(radius)?;
        return Ok(NamedFunction {
            sampled: bump.normalized_mass(config)?,
            radial: Some(bump.normalized_mass_profile(config)?),
        });
    }
    if let Some(rest) = name.strip_prefix("exp:z=") {
        let z: Vec<f64> = rest
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| DunklError::InvalidArgument(format!("bad exponent vector: {e}")))?;
        if z.len() != d {
            return Err(DunklError::InvalidArgument(format!(
                "exp:z needs {d} components, got {}",
                z.len()
            )));
        }
        let sampled = SampledFunction::new(
            d,
            Decay::CompactSupport {
                radius: f64::INFINITY,
                amplitude: f64::INFINITY,
            },
            dunkl_core::transform::DEFAULT_BOX_HALFWIDTH,
            move |x: &[f64]| x.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>().exp(),
        )?;
        return Ok(NamedFunction {
            sampled,
            radial: None,
        });
    }
    Err(DunklError::InvalidArgument(format!(
        "unknown function name '{name}'; known: gaussian, hermite1xgaussian, bump:a=R, exp:z=..."
    )))
}
