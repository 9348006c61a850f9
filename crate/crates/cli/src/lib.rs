//! Command-line experiments on top of `affsurf`.

pub mod body_spec;
pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use body_spec::{parse_body, BodySpec};
pub use config::ExperimentConfig;
pub use error::CliError;
pub use run::{run, Outcome};
