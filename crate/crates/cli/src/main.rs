use std::process::ExitCode;

use clap::Parser;
use flagtrop_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&cli) as u8)
}
