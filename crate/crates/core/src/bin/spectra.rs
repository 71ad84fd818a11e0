use std::process::ExitCode;

fn main() -> ExitCode {
    string_spectra::cli::main()
}
