use std::process::ExitCode;

use clap::Parser;
use harmonic_radii_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hradii: {}", f.message());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
