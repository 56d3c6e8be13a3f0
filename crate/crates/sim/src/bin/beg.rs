use std::process::ExitCode;

fn main() -> ExitCode {
    beg_sim::cli::main_with_args(std::env::args_os())
}
