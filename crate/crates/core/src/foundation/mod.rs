//! Group configuration, weight function, Mehta constant, normalized Bessel
//! function, and the quadrature rules every other module consumes.

pub mod config;
pub mod quad;
pub mod special;

pub use config::{mehta_constant, weight, GroupConfig, GroupVariant};
pub use quad::{
    gauss_jacobi, gauss_rule, halfline_power_rule, jacobi_type_prefactor, jacobi_type_rule,
    mapped_jacobi_rule, ProductRule, QuadRule,
};
pub use special::{gamma, normalized_bessel, normalized_bessel_with_error};
