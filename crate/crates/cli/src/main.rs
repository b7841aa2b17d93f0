use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    hcf_cli::run(hcf_cli::Cli::parse())
}
