use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ltt_cli::Cli::parse();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = ltt_cli::run(&cli, &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
