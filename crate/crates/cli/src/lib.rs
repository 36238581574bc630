//! Front end for `markov-tracking`: argument and config parsing, the six
//! subcommands, table regeneration and report output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod tables;

use clap::Parser;

pub use config::{Cli, RunSpec};
pub use error::{CliError, Result};
pub use output::Report;

/// Parses `args`, runs the command and writes its report. Returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { error::EXIT_VALIDATION } else { error::EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => error::EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let spec = RunSpec::from_command(&cli.command)?;
    let report = commands::run(&spec)?;
    report.emit(&spec)
}
