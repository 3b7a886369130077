use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(annealmax::cli::run())
}
