use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("fields live on different domains")]
    DomainMismatch,

    #[error("Beltrami coefficient has sup-norm {sup_norm} (must be < 1)")]
    InvalidBeltrami { sup_norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported transform method `{0}`")]
    UnsupportedMethod(String),

    #[error("contraction estimate {q} exceeds cap {cap}")]
    ContractionTooLarge { q: f64, cap: f64 },

    #[error(
        "Neumann iteration did not converge: residual {residual} after {iterations} iterations"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("immersion degenerates: min |g| = {min_abs_g}")]
    DegenerateImmersion { min_abs_g: f64 },

    #[error("frame conversion degenerates: {0}")]
    DegenerateFrame(String),

    #[error("Runge step {step}: polynomial approximation error {error} exceeds budget {budget}")]
    RungeApproximationFailure {
        step: usize,
        error: f64,
        budget: f64,
    },

    #[error("circle of radius {radius} around {center} leaves the grid")]
    CircleOutsideGrid { center: String, radius: f64 },

    #[error("unknown field `{0}`")]
    UnknownField(String),

    #[error("config: {0}")]
    Config(String),

    #[error("field format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Solver failures (as opposed to bad input or I/O).
    pub fn is_solver_error(&self) -> bool {
        matches!(
            self,
            Error::ContractionTooLarge { .. }
                | Error::NoConvergence { .. }
                | Error::DegenerateImmersion { .. }
                | Error::DegenerateFrame(_)
                | Error::RungeApproximationFailure { .. }
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDomain(_) => "invalid_domain",
            Error::DomainMismatch => "domain_mismatch",
            Error::InvalidBeltrami { .. } => "invalid_beltrami",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::UnsupportedMethod(_) => "unsupported_method",
            Error::ContractionTooLarge { .. } => "contraction_too_large",
            Error::NoConvergence { .. } => "no_convergence",
            Error::DegenerateImmersion { .. } => "degenerate_immersion",
            Error::DegenerateFrame(_) => "degenerate_frame",
            Error::RungeApproximationFailure { .. } => "runge_approximation_failure",
            Error::CircleOutsideGrid { .. } => "circle_outside_grid",
            Error::UnknownField(_) => "unknown_field",
            Error::Config(_) => "config",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
        }
    }
}
