use thiserror::Error;

/// Errors surfaced by the library.
///
/// Numerical "failure is a result" situations (a hypoellipticity check that
/// fails, a large Plancherel defect) are *not* errors; they are reported in
/// the corresponding result types. Errors are reserved for invalid inputs,
/// unsupported problem classes and quadrature that cannot reach the
/// requested accuracy.
#[derive(Debug, Error)]
pub enum DunklError {
    #[error("invalid group configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("polynomial degree {degree} exceeds the supported cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("polynomial parse error: {0}")]
    Parse(String),

    #[error("quadrature did not converge: estimated error {estimate:e} above tolerance {tolerance:e}")]
    QuadratureNonConvergence { estimate: f64, tolerance: f64 },

    #[error("truncation tail bound {bound:e} exceeds tolerance {tolerance:e}; enlarge the box or relax tol")]
    TailBound { bound: f64, tolerance: f64 },

    #[error("function violates its declared decay envelope at {point:?}: |f| = {value:e} > envelope {envelope:e}")]
    DecayEnvelope {
        point: Vec<f64>,
        value: f64,
        envelope: f64,
    },

    #[error("unsupported operation class: {0}")]
    Unsupported(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, DunklError>;
