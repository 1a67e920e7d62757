pub mod config;
pub mod experiments;
pub mod literal;

pub use config::{ConfigError, Experiment, ExperimentConfig};
pub use experiments::{run_experiment, Report, Status};
pub use literal::{parse_padic_literal, ParseError};
