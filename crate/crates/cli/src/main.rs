mod args;
mod commands;
mod support;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use vecflow_core::jsonio;
use vecflow_core::util::Budget;

use args::Cli;
use support::{Failure, Inputs};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; usage errors exit 2, help/version 0.
            return match e.exit_code() {
                0 => {
                    e.print().ok();
                    ExitCode::SUCCESS
                }
                _ => {
                    e.print().ok();
                    ExitCode::from(support::EXIT_PRECONDITION)
                }
            };
        }
    };

    let started = Instant::now();
    let tol = support::tolerances(&cli.global);
    let budget = cli
        .global
        .budget
        .map(Budget::from_millis)
        .unwrap_or_else(Budget::unlimited);
    let parameters = support::parameters(&cli.command);
    let mut inputs = Inputs::default();

    let run = commands::execute(&cli.command, &tol, &budget, &mut inputs).and_then(|res| {
        let hash = support::emit_output(cli.global.out.as_deref(), &res.output)?;
        Ok((res.summary, hash))
    });

    let (mut code, outcome, output_hash) = match run {
        Ok((summary, hash)) => (0u8, summary, Some(hash)),
        Err(failure) => {
            eprint!("{}", jsonio::render(&failure.diagnostic()));
            (failure.exit_code(), failure.diagnostic(), None)
        }
    };

    if let Some(path) = &cli.global.manifest {
        let manifest = support::manifest_value(
            cli.command.name(),
            parameters,
            &inputs,
            &tol,
            cli.global.budget,
            outcome,
            output_hash.as_deref(),
            started.elapsed().as_millis(),
        );
        if let Err(e) = std::fs::write(path, jsonio::render(&manifest)) {
            let failure = Failure::from(e);
            eprint!("{}", jsonio::render(&failure.diagnostic()));
            if code == 0 {
                code = failure.exit_code();
            }
        }
    }

    ExitCode::from(code)
}
