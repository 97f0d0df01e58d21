use std::process::ExitCode;

use everett_cli::{execute, parse_args, ParseOutcome};

fn main() -> ExitCode {
    let config = match parse_args(std::env::args_os()) {
        Ok(c) => c,
        Err(ParseOutcome::Clap(e)) => e.exit(),
        Err(ParseOutcome::Cli(e)) => {
            eprintln!("everett: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&config) {
        Ok(report) => {
            eprintln!(
                "everett: {} finished in {:.3} s",
                config.experiment, report.wall_time_s
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("everett: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
