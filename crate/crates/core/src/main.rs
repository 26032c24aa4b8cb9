use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(bingap::cli::run() as u8)
}
