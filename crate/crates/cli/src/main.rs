use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

fn print(text: &str) -> bool {
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .is_ok()
}

fn main() -> ExitCode {
    let cli = diskmodes_cli::Cli::parse();
    match diskmodes_cli::run(cli) {
        Ok(Some(text)) if !print(&text) => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            if let diskmodes_cli::CliError::VerifyFailed {
                report: Some(text), ..
            } = &e
            {
                print(text);
            }
            eprintln!("diskmodes: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
