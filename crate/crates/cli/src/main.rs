use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qwalk_cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("QWALK_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: QWALK_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, out)) => match out {
            None => {
                print!("{text}");
                let _ = std::io::stdout().flush();
                ExitCode::SUCCESS
            }
            Some(path) => match std::fs::write(&path, &text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    ExitCode::from(2)
                }
            },
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
