//! Emit degraded judgments or a reduced topic list.

use lexiprec::experiments::{degrade_labels, degrade_labels_stratified, degrade_queries};
use lexiprec::ingest::serialize_qrels;
use lexiprec::model::{Id, Interner};

use crate::cli::{DegradeArgs, DegradeModeArg};
use crate::error::{CliError, CliResult};
use crate::inputs::load_qrels;
use crate::output::write_text;

pub fn run(args: &DegradeArgs) -> CliResult {
    if !(0.0..1.0).contains(&args.fraction) {
        return Err(CliError::usage(format!(
            "removal fraction {} outside [0, 1)",
            args.fraction
        )));
    }
    let mut interner = Interner::new();
    let judgments = load_qrels(&args.qrels, args.binarize_threshold, &mut interner)?;
    match args.mode {
        DegradeModeArg::Labels => {
            let degraded = if args.stratified {
                degrade_labels_stratified(&judgments, args.fraction, args.seed)?
            } else {
                degrade_labels(&judgments, args.fraction, args.seed)?
            };
            let mut text = Vec::new();
            serialize_qrels(&degraded, &mut text)?;
            let text = String::from_utf8(text).expect("qrels rows are ASCII");
            write_text(args.out.as_ref(), &text)
        }
        DegradeModeArg::Queries => {
            if args.stratified {
                return Err(CliError::usage(
                    "--stratified only applies to label removal",
                ));
            }
            let topics: Vec<Id> = judgments.topics().cloned().collect();
            let kept = degrade_queries(&topics, args.fraction, args.seed)?;
            let mut text = String::new();
            for topic in &kept {
                text.push_str(topic);
                text.push('\n');
            }
            write_text(args.out.as_ref(), &text)
        }
    }
}
