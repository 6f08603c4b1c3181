use std::process::ExitCode;

fn main() -> ExitCode {
    revmul::cli::main()
}
