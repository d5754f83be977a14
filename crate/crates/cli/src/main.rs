use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = permfield_cli::dispatch(std::env::args_os());
    let _ = std::io::stdout().write_all(result.output.as_bytes());
    let _ = std::io::stderr().write_all(result.diagnostics.as_bytes());
    ExitCode::from(result.exit_code as u8)
}
