use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    // Panics are turned into reports; keep stderr free of the default message.
    std::panic::set_hook(Box::new(|_| {}));
    let (code, out) = dgweight_cli::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(code as u8)
}
