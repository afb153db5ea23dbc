use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] schur_horn::Error),

    #[error("unknown instance family `{0}`")]
    UnknownFamily(String),

    #[error("slope fit needs at least two usable grid points, got {points}")]
    InsufficientGrid { points: usize },

    #[error("sample count must be positive")]
    EmptySample,

    #[error("invalid sweep config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// Input was infeasible for the requested construction.
    pub fn is_feasibility(&self) -> bool {
        matches!(self, HarnessError::Core(e) if e.is_feasibility())
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
