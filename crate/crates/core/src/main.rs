use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use action_waves::cli::{dispatch, exit, exit_code_for, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };

    let output = match dispatch(&config.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e) as u8);
        }
    };

    let text = output.render(config.format);
    let written = match &config.out {
        Some(path) => fs::write(path, text.as_bytes()),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(exit::USAGE as u8);
    }
    ExitCode::from(output.exit_code() as u8)
}
