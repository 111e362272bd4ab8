use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be positive (got {value})")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("interval half-length T={t} is below the minimum {min} for this potential")]
    TooShortInterval { t: f64, min: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimated error {estimate:e}) after {evaluations} evaluations")]
    QuadratureNonConvergence { tolerance: f64, estimate: f64, evaluations: usize },

    #[error("relaxation did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("zero-mode residual {residual:e} exceeds bound {bound:e}; refine the grid")]
    GridTooCoarse { residual: f64, bound: f64 },

    #[error("scaled time {scaled_time} outside the safe window (0, {limit}]")]
    OverflowRisk { scaled_time: f64, limit: f64 },

    #[error("need at least {required} points, got {got}")]
    InsufficientPoints { required: usize, got: usize },

    #[error("grid invariant violated: {0}")]
    GridInvariantViolation(String),

    #[error("eigensolver failure: {0}")]
    EigensolverFailure(String),

    #[error("level {level} has parity purity {purity:.6} below the 0.99 threshold")]
    ParityAmbiguous { level: usize, purity: f64 },

    #[error("three-state model needs a nonzero coupling H_LC")]
    DegenerateCoupling,

    #[error("{well} well state leaks {leakage:.4} of its probability outside its basin")]
    LocalizationFailure { well: &'static str, leakage: f64 },

    #[error("classical action S_E={action:.6} is below the semiclassical guard {threshold}")]
    RegimeGuard { action: f64, threshold: f64 },
}

/// Coarse classification used by front ends to map errors to exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Numerical,
    Regime,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParameter { .. }
            | Error::TooShortInterval { .. }
            | Error::OverflowRisk { .. }
            | Error::InsufficientPoints { .. }
            | Error::GridInvariantViolation(_) => ErrorClass::Config,
            Error::RegimeGuard { .. } => ErrorClass::Regime,
            _ => ErrorClass::Numerical,
        }
    }

    /// Stable snake_case identifier for machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::TooShortInterval { .. } => "too_short_interval",
            Error::QuadratureNonConvergence { .. } => "quadrature_non_convergence",
            Error::NoConvergence { .. } => "no_convergence",
            Error::GridTooCoarse { .. } => "grid_too_coarse",
            Error::OverflowRisk { .. } => "overflow_risk",
            Error::InsufficientPoints { .. } => "insufficient_points",
            Error::GridInvariantViolation(_) => "grid_invariant_violation",
            Error::EigensolverFailure(_) => "eigensolver_failure",
            Error::ParityAmbiguous { .. } => "parity_ambiguous",
            Error::DegenerateCoupling => "degenerate_coupling",
            Error::LocalizationFailure { .. } => "localization_failure",
            Error::RegimeGuard { .. } => "regime_guard",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
