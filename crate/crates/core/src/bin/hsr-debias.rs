use std::process::ExitCode;

use clap::Parser;
use hsr_debias::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
