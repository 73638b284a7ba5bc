//! Significance tests over all run pairs.

use lexiprec::experiments::{discriminative_power, Method, SigTest};
use lexiprec::report::{Cell, Report};

use crate::cli::SignificanceArgs;
use crate::error::{CliError, CliResult};
use crate::inputs::load_inputs;
use crate::output::emit;

pub fn run(args: &SignificanceArgs) -> CliResult {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(CliError::usage(format!(
            "--alpha {} outside (0, 1)",
            args.alpha
        )));
    }
    let (judgments, runs) = load_inputs(&args.input)?;
    let tests = match args.test {
        Some(test) => vec![test.to_test()],
        None => vec![SigTest::Hsd, SigTest::Paired],
    };
    let methods = match args.scheme {
        Some(scheme) => vec![scheme.to_method()],
        None => Method::ALL.to_vec(),
    };

    let mut report = Report::new([
        "method",
        "test",
        "run_a",
        "run_b",
        "statistic",
        "p_value",
        "significant",
    ]);
    report
        .config_entry("alpha", args.alpha)
        .config_entry("runs", runs.len())
        .config_entry("binarize_threshold", args.input.binarize_threshold);
    let mut results = Vec::new();
    for &method in &methods {
        for &test in &tests {
            results.push(discriminative_power(
                &runs, &judgments, method, test, args.alpha,
            )?);
        }
    }
    // Summary first (the headline numbers), then the per-pair detail.
    for power in &results {
        report.config_entry(
            format!(
                "percent_significant_{}_{}",
                power.test.name(),
                power.method.name()
            ),
            format!("{:.2}", power.percent_significant()),
        );
    }
    for power in &results {
        for pair in &power.pairs {
            report.push_row(vec![
                Cell::text(power.method.name()),
                Cell::text(power.test.name()),
                Cell::text(pair.run_a.clone()),
                Cell::text(pair.run_b.clone()),
                Cell::Float(pair.statistic),
                Cell::Float(pair.p_value),
                Cell::Bool(pair.significant),
            ]);
        }
    }
    emit(&report, &args.output)
}
