use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = yukawa_cli::run(std::env::args_os());
    // Nothing sensible is left to do if the terminal or pipe has gone away.
    let _ = std::io::stdout().lock().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(out.stderr.as_bytes());
    ExitCode::from(code)
}
