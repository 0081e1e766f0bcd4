use std::process::ExitCode;

mod commands;
mod output;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match commands::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::exit::USAGE } else { commands::exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = commands::run(cli);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.exit_code)
}
