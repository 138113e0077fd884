use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    // Law checks trap panics themselves and report them as failures.
    std::panic::set_hook(Box::new(|_| {}));
    let args: Vec<String> = std::env::args().collect();
    let out = joinframe_cli::run_command(&args);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
