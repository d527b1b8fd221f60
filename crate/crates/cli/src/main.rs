use std::process::ExitCode;

fn main() -> ExitCode {
    betafit::cli::run()
}
