use std::process::ExitCode;

use clap::Parser;
use redheffer_cli::emit::emit;
use redheffer_cli::{run_suite, Cli, RunConfig, EXIT_USAGE};

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE as u8)
}

fn main() -> ExitCode {
    let config = match RunConfig::from_cli(Cli::parse()) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let bundle = match run_suite(&config) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    if let Err(e) = emit(&bundle, config.format, config.output.as_deref()) {
        return fail(e);
    }
    let s = &bundle.summary;
    eprintln!(
        "{}: {} passed, {} failed, {} exploratory ({:.0} ms)",
        s.suite, s.passed, s.failed, s.exploratory, bundle.timing.elapsed_ms
    );
    ExitCode::from(bundle.exit_code() as u8)
}
