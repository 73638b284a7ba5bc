//! Per-topic recall-level metrics.

use lexiprec::metrics::{esl_at_level, rr_at_level};
use lexiprec::model::position_vector;
use lexiprec::report::{Cell, Report};
use lexiprec::Rational;

use crate::cli::EvalArgs;
use crate::error::{CliError, CliResult};
use crate::inputs::load_inputs;
use crate::output::emit;

pub fn run(args: &EvalArgs) -> CliResult {
    if args.level == 0 {
        return Err(CliError::usage("--level must be at least 1"));
    }
    let (judgments, runs) = load_inputs(&args.input)?;
    let mut report = Report::new([
        "run",
        "topic",
        "relevant",
        "retrieved",
        "rr",
        "esl",
        "positions",
    ]);
    report
        .config_entry("level", args.level)
        .config_entry("binarize_threshold", args.input.binarize_threshold)
        .config_entry("runs", runs.len());
    for run in &runs {
        for topic in judgments.topics() {
            let pv = position_vector(run, &judgments, topic)?;
            if pv.total_relevant() == 0 {
                continue;
            }
            let (rr, esl) = if args.level <= pv.total_relevant() {
                let rr: Rational = rr_at_level(&pv, args.level)?;
                let esl = esl_at_level(&pv, args.level)?;
                (Cell::Rational(rr), esl.map_or(Cell::Empty, |p| Cell::UInt(p.into())))
            } else {
                // The topic has fewer relevant documents than the
                // requested level, so the metric is undefined there.
                (Cell::Empty, Cell::Empty)
            };
            let positions: Vec<String> =
                pv.positions().iter().map(|p| p.to_string()).collect();
            report.push_row(vec![
                Cell::text(run.run_tag()),
                Cell::text(topic.as_ref()),
                Cell::UInt(pv.total_relevant().into()),
                Cell::UInt(pv.positions().len() as u64),
                rr,
                esl,
                Cell::text(positions.join(";")),
            ]);
        }
    }
    emit(&report, &args.output)
}
