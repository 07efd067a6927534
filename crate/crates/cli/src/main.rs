mod args;
mod output;
mod run;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use run::{exit_code, RunError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = match run::run(&cli.command, &cli.common) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("ellidelta: {e}");
            if let RunError::Library(err) = &e {
                if err.is_degenerate() {
                    eprintln!("ellidelta: parameters lie on an exceptional set");
                }
            }
            return ExitCode::from(2);
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = out.write(cli.common.output, &mut lock).and_then(|_| lock.flush()) {
        eprintln!("ellidelta: writing output: {e}");
        return ExitCode::from(2);
    }
    let verdicts = out.verdicts();
    if verdicts.len() > 1 {
        let count = |v| verdicts.iter().filter(|&&x| x == v).count();
        use ellidelta::identities::Verdict::*;
        eprintln!("ellidelta: {} pass, {} fail, {} degenerate", count(Pass), count(Fail), count(Degenerate));
    }
    ExitCode::from(exit_code(&verdicts))
}
