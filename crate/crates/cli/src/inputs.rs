//! Input loading shared by the run-consuming subcommands.

use std::path::{Path, PathBuf};

use lexiprec::ingest::{parse_qrels_file, parse_run_file};
use lexiprec::model::{Interner, Judgments, RunRanking, SubmissionOrder};

use crate::cli::InputArgs;
use crate::error::{CliError, CliResult};

/// Loads the qrels and every run named by `--runs`, expanding
/// directories, sorting paths so the parse order is deterministic,
/// and returning the runs sorted by tag.
pub fn load_inputs(args: &InputArgs) -> CliResult<(Judgments, Vec<RunRanking>)> {
    let mut interner = Interner::new();
    let judgments = load_qrels(&args.qrels, args.binarize_threshold, &mut interner)?;
    let files = expand_run_paths(&args.runs, &args.qrels)?;
    let mut runs = Vec::with_capacity(files.len());
    for path in &files {
        runs.push(load_run(path, &mut interner)?);
    }
    runs.sort_by(|a, b| a.run_tag().cmp(b.run_tag()));
    for pair in runs.windows(2) {
        if pair[0].run_tag() == pair[1].run_tag() {
            return Err(CliError::data(format!(
                "duplicate run tag {:?}: every run needs a distinct tag",
                pair[0].run_tag()
            )));
        }
    }
    Ok((judgments, runs))
}

pub fn load_qrels(path: &Path, threshold: u32, interner: &mut Interner) -> CliResult<Judgments> {
    if threshold == 0 {
        return Err(CliError::usage("--binarize-threshold must be at least 1"));
    }
    parse_qrels_file(path, interner, threshold)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

pub fn load_run(path: &Path, interner: &mut Interner) -> CliResult<RunRanking> {
    parse_run_file(path, interner, SubmissionOrder::ScoreThenDoc)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

fn expand_run_paths(paths: &[PathBuf], qrels: &Path) -> CliResult<Vec<PathBuf>> {
    // A directory holding both the runs and the qrels (the layout the
    // synth subcommand writes) is common; the judgments are already
    // named by --qrels, so directory expansion skips that one file.
    let qrels = qrels.canonicalize().ok();
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let entries = std::fs::read_dir(path)
                .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
            let mut from_dir = Vec::new();
            for entry in entries {
                let p = entry
                    .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?
                    .path();
                if p.is_file() && (qrels.is_none() || p.canonicalize().ok() != qrels) {
                    from_dir.push(p);
                }
            }
            if from_dir.is_empty() {
                return Err(CliError::data(format!(
                    "{}: directory contains no run files",
                    path.display()
                )));
            }
            files.extend(from_dir);
        } else {
            files.push(path.clone());
        }
    }
    files.sort();
    files.dedup();
    Ok(files)
}
