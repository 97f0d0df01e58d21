//! Command-line front end: configuration, dispatch and deterministic reports.

pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use config::{parse_args, ExperimentConfig, ExperimentKind, OutputFormat, ParseOutcome, Params};
pub use error::CliError;
pub use report::{emit_report, parse_report_json, ExperimentReport, Payload};
pub use run::{execute, run_experiment};
