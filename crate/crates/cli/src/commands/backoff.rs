//! Correlation and regression structure across recall levels.

use lexiprec::experiments::backoff_analysis;
use lexiprec::report::{Cell, Report};

use crate::cli::BackoffArgs;
use crate::error::{CliError, CliResult};
use crate::inputs::load_inputs;
use crate::output::emit;

pub fn run(args: &BackoffArgs) -> CliResult {
    if args.max_level < 2 {
        return Err(CliError::usage("--max-level must be at least 2"));
    }
    if args.horizon < 1 {
        return Err(CliError::usage("--horizon must be at least 1"));
    }
    let (judgments, runs) = load_inputs(&args.input)?;
    let analysis = backoff_analysis(&runs, &judgments, args.max_level, args.horizon)?;

    let mut report = Report::new(["section", "level", "term", "value", "n"]);
    report
        .config_entry("max_level", analysis.max_level)
        .config_entry("horizon", analysis.horizon)
        .config_entry("binarize_threshold", args.input.binarize_threshold);
    for i in 1..=analysis.max_level {
        for j in 1..=analysis.max_level {
            report.push_row(vec![
                Cell::text("correlation"),
                Cell::UInt(i.into()),
                Cell::text(j.to_string()),
                Cell::opt_float(analysis.correlation(i, j)),
                Cell::Empty,
            ]);
        }
    }
    for (level, regression) in &analysis.regressions {
        match regression {
            Some(fit) => {
                let mut terms = vec!["intercept".to_string()];
                terms.extend(
                    (level + 1..=level + analysis.horizon).map(|j| format!("delta-rr{j}")),
                );
                for (term, coefficient) in terms.iter().zip(&fit.coefficients) {
                    report.push_row(vec![
                        Cell::text("regression"),
                        Cell::UInt((*level).into()),
                        Cell::text(term),
                        Cell::Float(*coefficient),
                        Cell::UInt(fit.n as u64),
                    ]);
                }
            }
            None => {
                // Too little data, or a degenerate design: the fit is
                // flagged rather than silently dropped.
                report.push_row(vec![
                    Cell::text("regression"),
                    Cell::UInt((*level).into()),
                    Cell::text("undefined"),
                    Cell::Empty,
                    Cell::Empty,
                ]);
            }
        }
    }
    emit(&report, &args.output)
}
