use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use compspace_cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_error = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage_error { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            // A closed pipe on stdout is not an error worth reporting.
            let _ = writeln!(std::io::stdout(), "{}", render(&outcome.report, cli.flags.json));
            if !cli.flags.quiet {
                eprintln!("{}", outcome.human);
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
