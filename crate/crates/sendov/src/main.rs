use std::process::ExitCode;

fn main() -> ExitCode {
    sendov::cli::run()
}
