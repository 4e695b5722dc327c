use std::io::Write;
use std::process::ExitCode;

use weylkit::cli::{parse_args, run, Parsed};
use weylkit::{CliError, CliResult};

fn write_file(path: &std::path::Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn main() -> ExitCode {
    let result = parse_args(std::env::args_os().collect()).and_then(|parsed| match parsed {
        Parsed::Display(text) => {
            print!("{text}");
            Ok(())
        }
        Parsed::Run(cli) => {
            let out = run(&cli)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            for (path, text) in &out.files {
                write_file(path, text)?;
            }
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.main.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
