use clap::error::ErrorKind;
use clap::Parser;
use qsearch_cli::{configure_threads, execute, Cli};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = std::env::var("GROVER_THREADS").ok();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = configure_threads(threads.as_deref()).and_then(|()| execute(&cli, &mut out));
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qsearch: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
