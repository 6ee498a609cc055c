//! Config handling, pipeline runs and artifact export behind the `ipp`
//! binary.

pub mod config;
pub mod error;
pub mod export;
pub mod pipeline;
pub mod svg;

pub use config::RunConfig;
pub use error::CliError;
pub use pipeline::{prepare, run_compare, run_oracle, run_plan};
