use std::process::ExitCode;

fn main() -> ExitCode {
    orthosfm::cli::main_with_args(std::env::args_os())
}
