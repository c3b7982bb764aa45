use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(spectral_factor_cli::run(std::env::args_os()) as u8)
}
