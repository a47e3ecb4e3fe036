use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use shc_cli::{execute, Cli, CliError};

fn run() -> Result<bool, CliError> {
    let cli = Cli::parse();
    let cfg = cli.run_config()?;
    let out = execute(&cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, &out.text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = stdout.write_all(out.text.as_bytes());
        }
    }
    Ok(out.passed)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("shc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
