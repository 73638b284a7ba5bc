//! Tie census and decisive-level distribution.

use lexiprec::experiments::{istar_ecdf, tie_census, TieRate};
use lexiprec::report::{Cell, Report};

use crate::cli::CensusArgs;
use crate::error::CliResult;
use crate::inputs::load_inputs;
use crate::output::emit;

pub fn run(args: &CensusArgs) -> CliResult {
    let (judgments, runs) = load_inputs(&args.input)?;
    let census = tie_census(&runs, &judgments)?;
    let ecdf = istar_ecdf(&runs, &judgments)?;

    let mut report = Report::new(["section", "key", "count", "total", "percent"]);
    report
        .config_entry("runs", runs.len())
        .config_entry("comparisons", census.comparisons)
        .config_entry("binarize_threshold", args.input.binarize_threshold);

    push_rate(&mut report, "ties", "delta-rr1", &census.delta_rr1);
    push_rate(&mut report, "ties", "lexiprecision", &census.lexiprecision);
    for (level, rate) in census.by_level.iter().enumerate() {
        push_rate(&mut report, "ties-by-level", &(level + 1).to_string(), rate);
    }
    // Key 0 stands for sides that retrieved no relevant document.
    for (first, rate) in &census.by_first_position {
        push_rate(
            &mut report,
            "ties-by-first-position",
            &first.to_string(),
            rate,
        );
    }
    for (&level, &count) in &ecdf.counts {
        report.push_row(vec![
            Cell::text("istar-ecdf"),
            Cell::text(level.to_string()),
            Cell::UInt(count),
            Cell::UInt(ecdf.decided),
            Cell::Float(100.0 * ecdf.cumulative_at(level)),
        ]);
    }
    emit(&report, &args.output)
}

fn push_rate(report: &mut Report, section: &str, key: &str, rate: &TieRate) {
    report.push_row(vec![
        Cell::text(section),
        Cell::text(key),
        Cell::UInt(rate.ties),
        Cell::UInt(rate.total),
        Cell::opt_float(rate.percentage()),
    ]);
}
