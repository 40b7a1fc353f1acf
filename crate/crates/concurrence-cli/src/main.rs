//! `concurrence` command line: analyze state files, generate the
//! standard families, run the randomized verification suites, emit
//! parameter-sweep CSVs, and search decompositions for the
//! entanglement of formation.

mod args;
mod cmds;
mod fmt;

use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match cmds::dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
