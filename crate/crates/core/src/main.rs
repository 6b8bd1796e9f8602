use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, stdout, stderr) = symsep::cli::main_with_args(std::env::args_os());
    print!("{stdout}");
    eprint!("{stderr}");
    let _ = std::io::stdout().flush();
    ExitCode::from(code)
}
