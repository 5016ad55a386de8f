//! Command-line runner for the verification suites in `redheffer-core`.

pub mod cache;
pub mod config;
pub mod emit;
pub mod run;

pub use config::{Cli, Format, RunConfig};
pub use run::{run_suite, ReportBundle};

/// Exit code for an invalid invocation or an I/O failure.
pub const EXIT_USAGE: i32 = 2;
