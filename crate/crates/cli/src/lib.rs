//! Command-line front end for the conditional gradient benchmark harness:
//! `run` (one solve, trace CSV), `compare` (one problem under several step
//! strategies), and `verify-rates` (worst-case bound checks on a measured
//! trace).

pub mod args;
pub mod commands;
pub mod instance;
pub mod output;

use std::ffi::OsString;

/// Failure with its exit code: usage errors exit 2, run failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Run(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Run(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

impl std::error::Error for CliError {}

/// Parse `args` (including the program name) and dispatch. Returns the
/// process exit code rather than exiting, so tests can drive it directly.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::Parser as _;
    let cli = match args::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap routes help and version to stdout, real errors to stderr.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.command {
        args::Command::Run(a) => match args::resolve_run(&a) {
            Ok(spec) => commands::run::cmd_run(&spec),
            Err(e) => report(e),
        },
        args::Command::Compare(a) => match args::resolve_compare(&a) {
            Ok((spec, kinds)) => commands::compare::cmd_compare(&spec, &kinds),
            Err(e) => report(e),
        },
        args::Command::VerifyRates(a) => match args::resolve_verify(&a) {
            Ok((spec, checkpoints)) => commands::verify::cmd_verify(&spec, &checkpoints),
            Err(e) => report(e),
        },
    }
}

fn report(e: CliError) -> i32 {
    eprintln!("error: {e}");
    e.code()
}
