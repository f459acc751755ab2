use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(rmas::cli::run_cli(std::env::args()) as u8)
}
