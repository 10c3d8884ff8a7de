use odl_core::Error as CoreError;

use crate::config::{ConfigError, Experiment};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("{experiment}: {source}")]
    Module {
        experiment: Experiment,
        #[source]
        source: CoreError,
    },
    #[error("{experiment}: {message}")]
    Budget { experiment: Experiment, message: String },
    #[error("{experiment}: oracle needs {needed} evaluations, budget is {budget}")]
    OracleBudgetExceeded {
        experiment: Experiment,
        needed: u128,
        budget: u128,
    },
    #[error("{0} has no calibration")]
    NotCalibratable(Experiment),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("fixture: {0}")]
    Json(#[from] serde_json::Error),
}

impl RunError {
    pub fn module(experiment: Experiment) -> impl Fn(CoreError) -> RunError {
        move |source| RunError::Module { experiment, source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::NotCalibratable(_) => 2,
            RunError::Budget { .. } | RunError::OracleBudgetExceeded { .. } => 3,
            RunError::Module { source, .. } => match source {
                CoreError::SizeBudgetExceeded { .. }
                | CoreError::ResolutionTooLarge { .. }
                | CoreError::BallBudgetExceeded { .. } => 3,
                _ => 1,
            },
            RunError::Io(_) | RunError::Json(_) => 1,
        }
    }
}
