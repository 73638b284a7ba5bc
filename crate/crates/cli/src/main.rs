//! `lexiprec`: best-case ranking evaluation from the command line.
//!
//! Nine subcommands expose the library: per-topic metrics (`eval`),
//! pairwise preferences (`compare`), the tie census (`census`),
//! masked-prefix and degradation agreement (`agreement`), degraded
//! qrels or topic lists (`degrade`), significance tests over run
//! pairs (`significance`), recall-level correlation structure
//! (`backoff`), closed-form combinatorial curves (`theory`), and
//! synthetic benchmark generation (`synth`).
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 on a data error.
//! All output is deterministic: row order is fixed (topics
//! lexicographic, run pairs lexicographic by tag) and results never
//! depend on the worker thread count.

mod cli;
mod commands;
mod error;
mod inputs;
mod output;

use clap::error::ErrorKind;
use clap::Parser;

use crate::cli::Cli;
use crate::error::CliError;

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("usage error: --threads must be at least 1");
            return 1;
        }
        // Configured once, before any parallel section runs. Every
        // parallel aggregation in the library is exact, so the thread
        // count cannot change any output.
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure {threads} worker threads: {err}");
            return 2;
        }
    }
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(CliError::Usage(message)) => {
            eprintln!("usage error: {message}");
            1
        }
        Err(CliError::Data(message)) => {
            eprintln!("error: {message}");
            2
        }
    }
}
