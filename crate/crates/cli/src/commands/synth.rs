//! Synthetic benchmark generation.

use std::io::Write;

use lexiprec::error::Error;
use lexiprec::ingest::{serialize_qrels, serialize_run, synth_generate, SynthConfig};

use crate::cli::SynthArgs;
use crate::error::{CliError, CliResult};
use crate::output::create;

pub fn run(args: &SynthArgs) -> CliResult {
    let config = SynthConfig {
        n_topics: args.topics,
        relevant_per_topic: args.relevant,
        corpus_size: args.corpus,
        depth: args.depth,
        n_runs: args.n_runs,
        quality: args.quality,
        seed: args.seed,
    };
    // Every generation parameter comes straight from a flag, so domain
    // violations are usage errors here.
    let (judgments, runs) = synth_generate(&config).map_err(|e| match e {
        Error::InvalidParameter(message) => CliError::usage(message),
        other => CliError::from(other),
    })?;

    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::data(format!("{}: {e}", args.out_dir.display())))?;
    let qrels_path = args.out_dir.join("qrels.txt");
    let mut qrels_file = create(&qrels_path)?;
    serialize_qrels(&judgments, &mut qrels_file)?;
    qrels_file
        .flush()
        .map_err(|e| CliError::data(format!("{}: {e}", qrels_path.display())))?;
    println!("{}", qrels_path.display());

    for run in &runs {
        let path = args.out_dir.join(format!("{}.run", run.run_tag()));
        let mut file = create(&path)?;
        serialize_run(run, &mut file)?;
        file.flush()
            .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(())
}
