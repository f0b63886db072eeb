use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use entwine::cli::{run, Cli, CliError, OutputFormat};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let code = match run(&cli) {
        Ok(outcome) => {
            match cli.output {
                OutputFormat::Json => println!("{}", outcome.to_json()),
                OutputFormat::Text => print!("{}", outcome.text),
            }
            outcome.exit_code()
        }
        Err(e) => {
            report_error(&cli, &e);
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn report_error(cli: &Cli, e: &CliError) {
    match (cli.output, e) {
        (OutputFormat::Json, CliError::Math(msg)) => {
            let v = json!({ "passed": false, "error": msg });
            println!("{}", entwine::cli::format::render(&v));
        }
        (_, CliError::Math(msg)) => println!("FAIL {msg}"),
        _ => eprintln!("error: {e}"),
    }
}
