use std::process::ExitCode;

fn main() -> ExitCode {
    cavqed::run(std::env::args_os())
}
