use std::io::Write;
use std::process::ExitCode;

use bjnear_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version are not errors; everything else is a usage error.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if !cli.quiet {
                let body = if cli.json {
                    serde_json::to_string_pretty(&out.json).expect("reports serialise") + "\n"
                } else {
                    out.text
                };
                // A closed pipe (e.g. `| head`) is not an error worth reporting.
                let _ = std::io::stdout().lock().write_all(body.as_bytes());
            }
            ExitCode::from(out.decision.exit_code() as u8)
        }
        Err(e) => {
            if !cli.quiet {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}
