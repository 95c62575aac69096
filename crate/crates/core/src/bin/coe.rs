use std::process::ExitCode;

fn main() -> ExitCode {
    coe_moments::cli::main()
}
