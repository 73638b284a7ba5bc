//! Pairwise preference between two runs.

use lexiprec::lexiprec::{aggregate_preference, lexi_compare, MagnitudeScheme};
use lexiprec::metrics::delta_rr;
use lexiprec::model::{position_vector, Interner, Preference};
use lexiprec::report::{Cell, Report};
use lexiprec::Rational;

use crate::cli::{CompareArgs, SchemeArg};
use crate::error::CliResult;
use crate::inputs::{load_qrels, load_run};
use crate::output::{emit, format_big};

pub fn run(args: &CompareArgs) -> CliResult {
    let mut interner = Interner::new();
    let judgments = load_qrels(&args.qrels, args.binarize_threshold, &mut interner)?;
    let run_a = load_run(&args.run_a, &mut interner)?;
    let run_b = load_run(&args.run_b, &mut interner)?;

    let mut report = Report::new(["topic", "istar", "sign", "magnitude"]);
    let mut preferences: Vec<Preference<Rational>> = Vec::new();
    for topic in judgments.topics() {
        if judgments.relevant_count(topic).unwrap_or(0) == 0 {
            continue;
        }
        let x = position_vector(&run_a, &judgments, topic)?;
        let y = position_vector(&run_b, &judgments, topic)?;
        let preference = match args.scheme {
            // The level-1 comparison alone: a nonzero difference is
            // "decided at level 1", a zero difference is a tie.
            SchemeArg::DeltaRr1 => {
                let d: Rational = delta_rr(&x, &y, 1)?;
                if d == Rational::new(0, 1) {
                    Preference::tie()
                } else {
                    Preference::decided(1, d)
                }
            }
            SchemeArg::RrLp | SchemeArg::SgnLp => lexi_compare(&x, &y)?,
        };
        let magnitude = match args.scheme {
            SchemeArg::SgnLp => Cell::Int(preference.sign().into()),
            _ => Cell::Rational(*preference.magnitude()),
        };
        report.push_row(vec![
            Cell::text(topic.as_ref()),
            preference
                .istar()
                .map_or(Cell::Empty, |level| Cell::UInt(level.into())),
            Cell::Int(preference.sign().into()),
            magnitude,
        ]);
        preferences.push(preference);
    }

    let mean = match args.scheme {
        // rrLP and δRR1 both average the stored magnitudes; for the
        // level-1 scheme those magnitudes are the level-1 differences.
        SchemeArg::RrLp | SchemeArg::DeltaRr1 => {
            aggregate_preference(&preferences, MagnitudeScheme::RrLp)?
        }
        SchemeArg::SgnLp => aggregate_preference(&preferences, MagnitudeScheme::SgnLp)?,
    };
    let ties = preferences.iter().filter(|p| p.is_tie()).count();
    report
        .config_entry("run_a", run_a.run_tag())
        .config_entry("run_b", run_b.run_tag())
        .config_entry("scheme", scheme_name(args.scheme))
        .config_entry("binarize_threshold", args.binarize_threshold)
        .config_entry("topics", preferences.len())
        .config_entry("ties", ties)
        .config_entry(
            "wins_a",
            preferences.iter().filter(|p| p.sign() > 0).count(),
        )
        .config_entry(
            "wins_b",
            preferences.iter().filter(|p| p.sign() < 0).count(),
        )
        .config_entry(
            "mean",
            format_big(&mean, args.output.precision.max(1), args.output.exact),
        );
    emit(&report, &args.output)
}

fn scheme_name(scheme: SchemeArg) -> &'static str {
    scheme.to_method().name()
}
