use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = kywhy::cli::run(std::env::args_os());
    print!("{}", outcome.stdout);
    if !outcome.stderr.is_empty() {
        eprintln!("{}", outcome.stderr.trim_end());
    }
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
