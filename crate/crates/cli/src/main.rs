use std::process::ExitCode;

use clap::Parser;
use dominance_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let written = run(&cli).and_then(|doc| match &cli.global.output {
        Some(path) => std::fs::write(path, doc)
            .map_err(|e| dominance_cli::CliError::Output(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(doc.as_bytes())
                .map_err(|e| dominance_cli::CliError::Output(e.to_string()))
        }
    });
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
