//! Command-line front end: configuration overrides, study orchestration and
//! reporting.

pub mod args;
pub mod plot;
pub mod report;
pub mod run;

pub use args::{Cli, Command, RunArgs, ScheduleArgs};
pub use run::{effective_config, run, schedule_table, CliError, FailureKind, RunOutcome, OUTPUTS};
