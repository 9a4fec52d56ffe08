use std::fmt;
use thiserror::Error;

/// Which complex component of a tessarine system failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Plus,
    Minus,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::Plus => "plus",
            Component::Minus => "minus",
        })
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A complex component system is rank deficient or too ill-conditioned to solve.
    #[error("singular tessarine system: {component} component has condition estimate {condition:e}")]
    Singular { component: Component, condition: f64 },

    /// `sensor` is a zero-based index; messages number sensors from 1.
    #[error("innovation covariance of sensor {} is singular at t={t}: {source}", .sensor + 1)]
    SingularInnovation {
        sensor: usize,
        t: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("innovation pseudo-variance of sensor {} at t={t} has real diagonal entry {value:e} at index {index}", .sensor + 1)]
    IndefiniteInnovation { sensor: usize, t: usize, index: usize, value: f64 },

    #[error("fusion covariance is singular at target t={t} given s={s}: {source}")]
    SingularFusion {
        t: usize,
        s: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("singular matrix in model construction at step {step}: {source}")]
    SingularModel {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("time index {t} outside horizon 0..={horizon}")]
    OutOfHorizon { t: usize, horizon: usize },

    #[error("invalid time ordering: {0}")]
    TimeOrder(String),

    #[error("missing history: {0}")]
    MissingHistory(String),

    #[error("properness violation: {0}")]
    Properness(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::SingularInnovation { .. }
                | Error::SingularFusion { .. }
                | Error::SingularModel { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
