use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hookext_cli::app::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let status = run(&cli, &mut out);
    let _ = out.flush();
    match status {
        Ok(s) => ExitCode::from(s.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
