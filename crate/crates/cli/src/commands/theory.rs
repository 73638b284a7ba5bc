//! Closed-form combinatorial curves with optional oracle checks.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use lexiprec::error::Error;
use lexiprec::report::{Cell, Report};
use lexiprec::theory::{choose, enumerate_arrangements, tie_probability, value_count_ratio};
use lexiprec::BigRational;

use crate::cli::TheoryArgs;
use crate::error::{CliError, CliResult};
use crate::output::emit;

pub fn run(args: &TheoryArgs) -> CliResult {
    if args.relevant < 1 {
        return Err(CliError::usage("--relevant must be at least 1"));
    }
    if args.relevant > args.corpus {
        return Err(CliError::usage(
            "--relevant cannot exceed the collection size",
        ));
    }
    if args.tie_prob {
        tie_prob(args)
    } else {
        value_count(args)
    }
}

/// P(two random arrangements tie at level 1 | the first one's first
/// relevant position), tabulated over every feasible first position.
fn tie_prob(args: &TheoryArgs) -> CliResult {
    let d = args.corpus;
    let r = args.relevant;
    let oracle = if args.verify {
        Some(enumeration_counts(d, r)?)
    } else {
        None
    };

    let mut report = if args.verify {
        Report::new(["r1", "probability", "verified"])
    } else {
        Report::new(["r1", "probability"])
    };
    report
        .config_entry("curve", "tie-prob")
        .config_entry("corpus", d)
        .config_entry("relevant", r);
    for r1 in 1..=(d - r + 1) {
        let probability = tie_probability(d, r, r1)?;
        let mut row = vec![
            Cell::UInt(r1),
            rational_cell(&probability, args.output.exact),
        ];
        if let Some((counts, total)) = &oracle {
            let count = counts
                .get((r1 - 1) as usize)
                .copied()
                .unwrap_or(0);
            let enumerated = BigRational::new(BigInt::from(count), total.clone());
            if enumerated != probability {
                return Err(CliError::data(format!(
                    "closed form and enumeration disagree at r1={r1}: \
                     {probability} vs {enumerated}"
                )));
            }
            row.push(Cell::Bool(true));
        }
        report.push_row(row);
    }
    emit(&report, &args.output)
}

/// Arrangement counts per first relevant position, from exhaustive
/// enumeration; the independent route behind `--verify`.
fn enumeration_counts(d: u64, r: u64) -> CliResult<(Vec<u64>, BigInt)> {
    let (d32, r32) = (u32::try_from(d), u32::try_from(r));
    let (Ok(d32), Ok(r32)) = (d32, r32) else {
        return Err(CliError::usage(
            "--verify needs a collection small enough to enumerate",
        ));
    };
    let arrangements = enumerate_arrangements(d32, r32).map_err(|e| match e {
        Error::EnumerationCapExceeded { .. } => CliError::usage(
            "--verify needs a collection small enough to enumerate; \
             drop the flag or shrink --corpus",
        ),
        other => CliError::from(other),
    })?;
    let mut counts = vec![0u64; (d - r + 1) as usize];
    for arrangement in &arrangements {
        counts[(arrangement.positions()[0] - 1) as usize] += 1;
    }
    Ok((counts, BigInt::from(arrangements.len())))
}

/// How many times the number of distinct metric values grows when `k`
/// relevant documents are added: C(D, R+k) / C(D, R).
fn value_count(args: &TheoryArgs) -> CliResult {
    let d = args.corpus;
    let r = args.relevant;
    if r + args.max_extra > d {
        return Err(CliError::usage(format!(
            "--max-extra too large: {r} + {} exceeds the collection size {d}",
            args.max_extra
        )));
    }
    let mut report = if args.verify {
        Report::new(["k", "ratio", "verified"])
    } else {
        Report::new(["k", "ratio"])
    };
    report
        .config_entry("curve", "value-count")
        .config_entry("corpus", d)
        .config_entry("relevant", r)
        .config_entry("max_extra", args.max_extra);
    let base = BigRational::from_integer(BigInt::from(choose(d, r)));
    for k in 0..=args.max_extra {
        let ratio = value_count_ratio(d, r, k)?;
        let mut row = vec![Cell::UInt(k), rational_cell(&ratio, args.output.exact)];
        if args.verify {
            // The independent route recomputes both binomials.
            let expected = BigRational::from_integer(BigInt::from(choose(d, r + k)));
            if ratio.clone() * base.clone() != expected {
                return Err(CliError::data(format!(
                    "scaling identity fails at k={k}: {ratio} times C({d},{r}) \
                     is not C({d},{})",
                    r + k
                )));
            }
            row.push(Cell::Bool(true));
        }
        report.push_row(row);
    }
    emit(&report, &args.output)
}

/// Arbitrary-precision values exceed the report's fixed-width rational
/// cell, so they are rendered here: verbatim in exact mode, as a
/// float otherwise.
fn rational_cell(value: &BigRational, exact: bool) -> Cell {
    if exact {
        Cell::text(format!("{}/{}", value.numer(), value.denom()))
    } else {
        Cell::Float(value.to_f64().unwrap_or(f64::NAN))
    }
}
