//! Masked-prefix prediction and agreement under degradation.

use lexiprec::experiments::{
    agreement_under_degradation, masked_prefix_agreement, DegradationMode, ExperimentConfig,
};
use lexiprec::report::{Cell, Report};

use crate::cli::{AgreementArgs, AgreementModeArg};
use crate::error::{CliError, CliResult};
use crate::inputs::load_inputs;
use crate::output::emit;

pub fn run(args: &AgreementArgs) -> CliResult {
    match args.mode {
        AgreementModeArg::Masked => masked(args),
        AgreementModeArg::Labels => degradation(args, DegradationMode::Labels),
        AgreementModeArg::Queries => degradation(args, DegradationMode::Queries),
    }
}

fn masked(args: &AgreementArgs) -> CliResult {
    if !args.fractions.is_empty() {
        return Err(CliError::usage(
            "--fractions only applies to the labels and queries modes",
        ));
    }
    let (judgments, runs) = load_inputs(&args.input)?;
    let masked = masked_prefix_agreement(&runs, &judgments)?;
    let mut report = Report::new(["predictor", "agreements", "qualifying", "percent"]);
    report
        .config_entry("mode", "masked")
        .config_entry("binarize_threshold", args.input.binarize_threshold);
    report.push_row(vec![
        Cell::text("sgnlp-suffix"),
        Cell::UInt(masked.sgn_lp_agreements),
        Cell::UInt(masked.qualifying),
        Cell::opt_float(masked.sgn_lp_percent()),
    ]);
    report.push_row(vec![
        Cell::text("delta-rr2"),
        Cell::UInt(masked.delta_rr2_agreements),
        Cell::UInt(masked.qualifying),
        Cell::opt_float(masked.delta_rr2_percent()),
    ]);
    emit(&report, &args.output)
}

fn degradation(args: &AgreementArgs, mode: DegradationMode) -> CliResult {
    if args.fractions.is_empty() {
        return Err(CliError::usage(
            "label and query degradation require --fractions",
        ));
    }
    for &fraction in &args.fractions {
        if !(0.0..1.0).contains(&fraction) {
            return Err(CliError::usage(format!(
                "removal fraction {fraction} outside [0, 1)"
            )));
        }
    }
    if args.samples < 1 {
        return Err(CliError::usage("--samples must be at least 1"));
    }
    let (judgments, runs) = load_inputs(&args.input)?;
    let config = ExperimentConfig {
        fractions: args.fractions.clone(),
        n_samples: args.samples,
        seed: args.seed,
        threshold: args.input.binarize_threshold,
        ..ExperimentConfig::default()
    };
    let curves = agreement_under_degradation(&runs, &judgments, mode, &config)?;

    let mut report = Report::new(["fraction", "kind", "method", "samples", "mean", "std_dev"]);
    report
        .config_entry("mode", curves.mode)
        .config_entry("samples", curves.n_samples)
        .config_entry("seed", curves.seed)
        .config_entry("binarize_threshold", args.input.binarize_threshold);
    for point in &curves.points {
        let defined = point.samples.iter().filter(|v| !v.is_nan()).count();
        report.push_row(vec![
            Cell::Float(point.fraction),
            Cell::text(point.kind.name()),
            Cell::text(point.method.name()),
            Cell::UInt(defined as u64),
            Cell::Float(point.mean),
            Cell::Float(point.std_dev),
        ]);
    }
    emit(&report, &args.output)
}
