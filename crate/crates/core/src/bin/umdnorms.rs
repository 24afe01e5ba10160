use std::io;
use std::process::ExitCode;

use clap::Parser;
use umdnorms::cli::{configure_threads, execute, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let result = configure_threads().and_then(|_| execute(&cfg, &mut io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
