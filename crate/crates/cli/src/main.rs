use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(phaselock_cli::run(std::env::args_os()))
}
