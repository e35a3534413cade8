use thiserror::Error;

/// Errors reported by the solvers and the sweep machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatterError {
    #[error("invalid particle: {0}")]
    InvalidParticle(String),

    #[error("incident energy inside gap: E = {energy}, mc² = {mass_energy}")]
    IncidentInGap { energy: f64, mass_energy: f64 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("barrier width must be positive, got {0}")]
    NonPositiveWidth(f64),

    #[error("singular interface system: {0}")]
    Singular(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("solution belongs to the {found} model, expected {expected}")]
    ModelMismatch {
        expected: &'static str,
        found: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, ScatterError>;
