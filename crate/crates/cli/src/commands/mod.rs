//! Subcommand implementations.

mod agreement;
mod backoff;
mod census;
mod compare;
mod degrade;
mod eval;
mod significance;
mod synth;
mod theory;

use crate::cli::Command;
use crate::error::CliResult;

pub fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Eval(args) => eval::run(&args),
        Command::Compare(args) => compare::run(&args),
        Command::Census(args) => census::run(&args),
        Command::Agreement(args) => agreement::run(&args),
        Command::Degrade(args) => degrade::run(&args),
        Command::Significance(args) => significance::run(&args),
        Command::Backoff(args) => backoff::run(&args),
        Command::Theory(args) => theory::run(&args),
        Command::Synth(args) => synth::run(&args),
    }
}
