//! Configuration ingestion, report envelopes and file output for the
//! command-line front end.

pub mod commands;
pub mod config;
pub mod output;
pub mod report;

pub use commands::{run_config, Output};
pub use config::{Format, RunConfig, Suite};
pub use report::ReportEnvelope;
