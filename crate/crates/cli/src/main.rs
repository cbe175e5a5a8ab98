use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use taxicab_bwm_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = run(&cli, &mut stdin.lock(), &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!(
                "{}",
                serde_json::to_string(&failure.to_json()).expect("json values serialize")
            );
            ExitCode::from(failure.code as u8)
        }
    }
}
