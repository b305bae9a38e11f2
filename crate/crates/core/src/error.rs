use thiserror::Error;

/// Errors produced by chain construction, assembly, eigen-solves and experiment runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pair distance must be positive, got {0}")]
    NonPositiveDistance(f64),

    #[error("non-physical bond between sites {ell} and {ell}+{k}: scaled length {length}")]
    NonPhysicalBond { ell: i64, k: i64, length: f64 },

    #[error("invalid blending layout: {0}")]
    InvalidLayout(String),

    #[error("fields or operators live on different chains")]
    ConfigMismatch,

    #[error("eigen-iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("operator is not coercive at the reference state (c_min = {c_min})")]
    NotCoerciveAtStart { c_min: f64 },

    #[error("no loss of coercivity found up to gamma = {gamma_max}")]
    NoSignChange { gamma_max: f64 },

    #[error("linear system is singular beyond the deflated constant mode (pivot {pivot:e} at row {row})")]
    SingularSystem { row: usize, pivot: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures caused by the user's configuration rather than the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::InvalidParameter(_)
                | Error::InvalidLayout(_)
                | Error::ConfigMismatch
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
