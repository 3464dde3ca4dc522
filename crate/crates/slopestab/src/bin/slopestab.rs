use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(slopestab::cli::run() as u8)
}
