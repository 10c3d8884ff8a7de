//! Seeded, reproducible experiment runs over the `odl-core` library.

pub mod calibrate;
pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

pub use calibrate::calibrate;
pub use config::{Budget, ConfigError, Experiment, ExperimentConfig};
pub use error::RunError;
pub use experiments::run;
pub use report::RunReport;
