//! Run and qrels file parsing, serialization, and synthetic data.
//!
//! # File formats
//!
//! Run files carry six whitespace-separated columns per row:
//! `<topic> <Q0> <doc> <rank> <score> <tag>`. The second column is
//! ignored, the tag must be uniform across the file, and by default
//! rows are ordered by score descending with ties broken by document
//! identifier descending (the convention of the standard evaluation
//! tool), not by the submitted rank field.
//!
//! Qrels files carry four columns: `<topic> <iter> <doc> <grade>`.
//! The iteration column is ignored; grades must be non-negative
//! integers.
//!
//! Any run of spaces or tabs separates fields; blank lines and
//! trailing whitespace are ignored. `parse(serialize(x)) == x` holds
//! for both formats.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{
    order_submission, Id, Interner, Judgments, RunRanking, ScoredDoc, SubmissionOrder,
};
use crate::rng::DetRng;

/// Parses one run file from a reader.
pub fn parse_run<R: BufRead>(
    reader: R,
    interner: &mut Interner,
    order: SubmissionOrder,
) -> Result<RunRanking> {
    let mut run_tag: Option<String> = None;
    let mut rows: BTreeMap<Id, Vec<ScoredDoc>> = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 6 {
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "expected 6 whitespace-separated fields, found {}",
                    fields.len()
                ),
            });
        }
        let topic = interner.intern(fields[0]);
        let doc = interner.intern(fields[2]);
        let rank: i64 = fields[3].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("invalid rank '{}'", fields[3]),
        })?;
        let score: f64 = fields[4].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("invalid score '{}'", fields[4]),
        })?;
        match &run_tag {
            None => run_tag = Some(fields[5].to_string()),
            Some(tag) if tag != fields[5] => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("run tag '{}' does not match earlier '{tag}'", fields[5]),
                });
            }
            Some(_) => {}
        }
        rows.entry(topic).or_default().push(ScoredDoc { doc, rank, score });
    }
    let Some(run_tag) = run_tag else {
        return Err(Error::InsufficientData("run file contains no rows".into()));
    };
    let mut topics = BTreeMap::new();
    for (topic, scored) in rows {
        let ordered = order_submission(&topic, &scored, order)?;
        topics.insert(topic, ordered);
    }
    RunRanking::from_topics(run_tag, topics)
}

/// Parses one run file from disk.
pub fn parse_run_file(
    path: impl AsRef<Path>,
    interner: &mut Interner,
    order: SubmissionOrder,
) -> Result<RunRanking> {
    parse_run(BufReader::new(File::open(path)?), interner, order)
}

/// Parses a qrels file from a reader, binarizing at `threshold`.
pub fn parse_qrels<R: BufRead>(
    reader: R,
    interner: &mut Interner,
    threshold: u32,
) -> Result<Judgments> {
    let mut rows: Vec<(Id, Id, u32)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "expected 4 whitespace-separated fields, found {}",
                    fields.len()
                ),
            });
        }
        let grade: i64 = fields[3].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("invalid grade '{}'", fields[3]),
        })?;
        if grade < 0 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("negative grade {grade}"),
            });
        }
        let grade = u32::try_from(grade).map_err(|_| Error::Parse {
            line: lineno,
            message: format!("grade {grade} out of range"),
        })?;
        rows.push((interner.intern(fields[0]), interner.intern(fields[2]), grade));
    }
    Judgments::from_rows(rows, threshold)
}

/// Parses a qrels file from disk.
pub fn parse_qrels_file(
    path: impl AsRef<Path>,
    interner: &mut Interner,
    threshold: u32,
) -> Result<Judgments> {
    parse_qrels(BufReader::new(File::open(path)?), interner, threshold)
}

/// Writes a run in the six-column format, topics in lexicographic
/// order and ranks ascending.
///
/// Scores are emitted as `len - rank + 1` per topic so that they
/// decrease strictly with rank: re-parsing under the default
/// score-then-document ordering reproduces the run exactly.
pub fn serialize_run<W: Write>(run: &RunRanking, mut out: W) -> Result<()> {
    for topic in run.topics() {
        let docs = run.ranking(topic).expect("topic listed by the run");
        let len = docs.len() as i64;
        for (idx, doc) in docs.iter().enumerate() {
            let rank = idx as i64 + 1;
            writeln!(
                out,
                "{topic} Q0 {doc} {rank} {score} {tag}",
                score = len - rank + 1,
                tag = run.run_tag()
            )?;
        }
    }
    Ok(())
}

/// Writes judgments in the four-column qrels format, topics and
/// documents in lexicographic order.
pub fn serialize_qrels<W: Write>(judgments: &Judgments, mut out: W) -> Result<()> {
    for (topic, doc, grade) in judgments.rows() {
        writeln!(out, "{topic} 0 {doc} {grade}")?;
    }
    Ok(())
}

/// Parameters for synthetic benchmark generation.
#[derive(Clone, Debug)]
pub struct SynthConfig {
    /// Number of topics.
    pub n_topics: u32,
    /// Relevant documents per topic.
    pub relevant_per_topic: u32,
    /// Documents per topic's candidate pool (identifiers are
    /// topic-scoped, so pools do not overlap across topics).
    pub corpus_size: u32,
    /// Documents each run retrieves per topic.
    pub depth: u32,
    /// Number of runs.
    pub n_runs: u32,
    /// Top of the quality ladder, in `[0, 1]`. Run `j` of `n` is
    /// generated at quality `quality * j / (n - 1)` (a single run uses
    /// `quality` directly), so a multi-run benchmark spans a spread of
    /// system strengths up to this value.
    pub quality: f64,
    /// Seed for the deterministic generator.
    pub seed: u64,
}

/// Generates a synthetic benchmark: judgments plus `n_runs` rankings,
/// a pure function of the configuration including the seed.
///
/// Per topic, the relevant documents are drawn uniformly from the
/// pool; each run then retrieves `depth` documents by weighted
/// sampling without replacement, where relevant documents carry
/// weight `1000 + round(q * 99000)` against 1000 for the rest, `q`
/// being the run's quality. At `q = 0` all weights are equal, so the
/// relevant positions are uniform over arrangements.
///
/// The generator consumes draws in a fixed, documented order: for
/// each topic in ascending order, first the relevant-set draws, then
/// each run's retrieval draws in run order.
pub fn synth_generate(config: &SynthConfig) -> Result<(Judgments, Vec<RunRanking>)> {
    validate(config)?;
    let topic_width = digits(config.n_topics);
    let doc_width = digits(config.corpus_size);
    let run_width = digits(config.n_runs);
    let mut rng = DetRng::new(config.seed);
    let mut interner = Interner::new();

    let mut qrel_rows: Vec<(Id, Id, u32)> = Vec::new();
    let mut run_topics: Vec<BTreeMap<Id, Vec<Id>>> =
        vec![BTreeMap::new(); config.n_runs as usize];

    for t in 1..=config.n_topics {
        let topic = interner.intern(&format!("t{t:0topic_width$}"));
        let doc_ids: Vec<Id> = (1..=config.corpus_size)
            .map(|d| interner.intern(&format!("{topic}-d{d:0doc_width$}")))
            .collect();

        let relevant = rng.sample_without_replacement(
            u64::from(config.corpus_size),
            u64::from(config.relevant_per_topic),
        );
        for &idx in &relevant {
            qrel_rows.push((Arc::clone(&topic), Arc::clone(&doc_ids[idx as usize]), 1));
        }

        for j in 0..config.n_runs {
            let q = run_quality(config.quality, j, config.n_runs);
            let boost = 1_000 + (q * 99_000.0).round() as u64;
            let mut pool: Vec<(u64, u64)> = (0..u64::from(config.corpus_size))
                .map(|idx| {
                    let weight = if relevant.binary_search(&idx).is_ok() {
                        boost
                    } else {
                        1_000
                    };
                    (idx, weight)
                })
                .collect();
            let mut total: u64 = pool.iter().map(|(_, w)| w).sum();
            let mut ranking = Vec::with_capacity(config.depth as usize);
            for _ in 0..config.depth {
                let mut x = rng.next_below(total);
                let mut pick = pool.len() - 1;
                for (i, (_, w)) in pool.iter().enumerate() {
                    if x < *w {
                        pick = i;
                        break;
                    }
                    x -= w;
                }
                let (idx, w) = pool.swap_remove(pick);
                total -= w;
                ranking.push(Arc::clone(&doc_ids[idx as usize]));
            }
            // swap_remove disturbed pool order; rebuild order doesn't
            // matter because the next topic rebuilds the pool anyway.
            run_topics[j as usize].insert(Arc::clone(&topic), ranking);
        }
    }

    let judgments = Judgments::from_rows(qrel_rows, 1)?;
    let runs = run_topics
        .into_iter()
        .enumerate()
        .map(|(j, topics)| RunRanking::from_topics(format!("synth-{j:0run_width$}"), topics))
        .collect::<Result<Vec<_>>>()?;
    Ok((judgments, runs))
}

fn run_quality(quality: f64, j: u32, n_runs: u32) -> f64 {
    if n_runs <= 1 {
        quality
    } else {
        quality * f64::from(j) / f64::from(n_runs - 1)
    }
}

fn validate(config: &SynthConfig) -> Result<()> {
    if config.n_topics < 1
        || config.relevant_per_topic < 1
        || config.corpus_size < 1
        || config.depth < 1
        || config.n_runs < 1
    {
        return Err(Error::InvalidParameter(
            "all synthetic counts must be at least 1".into(),
        ));
    }
    if !(0.0..=1.0).contains(&config.quality) {
        return Err(Error::InvalidParameter(format!(
            "quality {} outside [0, 1]",
            config.quality
        )));
    }
    if config.relevant_per_topic > config.corpus_size {
        return Err(Error::InvalidParameter(format!(
            "{} relevant documents cannot fit in a pool of {}",
            config.relevant_per_topic, config.corpus_size
        )));
    }
    if config.depth > config.corpus_size {
        return Err(Error::InvalidParameter(format!(
            "depth {} exceeds pool size {}",
            config.depth, config.corpus_size
        )));
    }
    Ok(())
}

fn digits(n: u32) -> usize {
    n.max(1).to_string().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::reciprocal_rank;
    use crate::model::position_vector;
    use crate::theory::tie_probability;
    use num_traits::ToPrimitive;

    fn parse_run_text(text: &str) -> Result<RunRanking> {
        parse_run(text.as_bytes(), &mut Interner::new(), SubmissionOrder::default())
    }

    fn parse_qrels_text(text: &str) -> Result<Judgments> {
        parse_qrels(text.as_bytes(), &mut Interner::new(), 1)
    }

    #[test]
    fn parse_run_basic() {
        let run = parse_run_text("q1 Q0 dA 1 2.5 sys1\n").unwrap();
        assert_eq!(run.run_tag(), "sys1");
        assert_eq!(run.ranking("q1").unwrap(), &[Arc::from("dA")]);
    }

    #[test]
    fn parse_run_orders_by_score_not_rank_field() {
        let text = "q1 Q0 dA 1 1.0 s\nq1 Q0 dB 2 9.0 s\n";
        let run = parse_run_text(text).unwrap();
        let docs: Vec<&str> = run.ranking("q1").unwrap().iter().map(|d| &**d).collect();
        assert_eq!(docs, vec!["dB", "dA"]);

        let trusted = parse_run(
            text.as_bytes(),
            &mut Interner::new(),
            SubmissionOrder::SubmittedRank,
        )
        .unwrap();
        let docs: Vec<&str> = trusted.ranking("q1").unwrap().iter().map(|d| &**d).collect();
        assert_eq!(docs, vec!["dA", "dB"]);
    }

    #[test]
    fn parse_run_field_count_error_carries_line_number() {
        let err = parse_run_text("q1 Q0 dA 1 2.5 sys1\nq1 Q0 dB 2 1.5\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("5"), "{message}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_run_rejects_duplicates_and_mixed_tags() {
        let err = parse_run_text("q1 Q0 dA 1 2.0 s\nq1 Q0 dA 2 1.0 s\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateDocument { .. }));

        let err = parse_run_text("q1 Q0 dA 1 2.0 s1\nq1 Q0 dB 2 1.0 s2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn parse_run_rejects_bad_numbers_and_empty_input() {
        assert!(matches!(
            parse_run_text("q1 Q0 dA one 2.0 s\n").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        assert!(matches!(
            parse_run_text("q1 Q0 dA 1 high s\n").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        assert!(matches!(
            parse_run_text("").unwrap_err(),
            Error::InsufficientData(_)
        ));
    }

    #[test]
    fn parse_run_skips_blank_lines() {
        let run = parse_run_text("\nq1 Q0 dA 1 2.0 s\n\n  \nq1 Q0 dB 2 1.0 s\n").unwrap();
        assert_eq!(run.ranking("q1").unwrap().len(), 2);
    }

    #[test]
    fn parse_qrels_basic() {
        let judgments = parse_qrels_text("q1 0 dA 2\nq1 0 dB 0\n").unwrap();
        assert_eq!(judgments.grade("q1", "dA"), Some(2));
        assert_eq!(judgments.grade("q1", "dB"), Some(0));
        assert_eq!(judgments.relevant_count("q1"), Some(1));
    }

    #[test]
    fn parse_qrels_rejects_duplicates_negatives_and_short_lines() {
        assert!(matches!(
            parse_qrels_text("q1 0 dA 1\nq1 0 dA 1\n").unwrap_err(),
            Error::DuplicateDocument { .. }
        ));
        assert!(matches!(
            parse_qrels_text("q1 0 dA -1\n").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        assert!(matches!(
            parse_qrels_text("q1 0 dA\n").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn run_round_trip() {
        let text = "q1 Q0 dA 1 3.0 s\nq1 Q0 dB 2 2.0 s\nq2 Q0 dC 1 5.0 s\n";
        let run = parse_run_text(text).unwrap();
        let mut bytes = Vec::new();
        serialize_run(&run, &mut bytes).unwrap();
        let reparsed = parse_run(
            bytes.as_slice(),
            &mut Interner::new(),
            SubmissionOrder::default(),
        )
        .unwrap();
        assert_eq!(run, reparsed);
    }

    #[test]
    fn qrels_round_trip() {
        let text = "q1 0 dA 2\nq1 0 dB 0\nq2 0 dC 1\n";
        let judgments = parse_qrels_text(text).unwrap();
        let mut bytes = Vec::new();
        serialize_qrels(&judgments, &mut bytes).unwrap();
        let reparsed = parse_qrels(bytes.as_slice(), &mut Interner::new(), 1).unwrap();
        assert_eq!(judgments, reparsed);
    }

    fn desk_config() -> SynthConfig {
        SynthConfig {
            n_topics: 3,
            relevant_per_topic: 2,
            corpus_size: 20,
            depth: 10,
            n_runs: 2,
            quality: 0.8,
            seed: 17,
        }
    }

    #[test]
    fn synth_is_deterministic_per_seed() {
        let (j1, r1) = synth_generate(&desk_config()).unwrap();
        let (j2, r2) = synth_generate(&desk_config()).unwrap();
        assert_eq!(j1, j2);
        assert_eq!(r1, r2);

        let mut bytes1 = Vec::new();
        serialize_qrels(&j1, &mut bytes1).unwrap();
        let mut bytes2 = Vec::new();
        serialize_qrels(&j2, &mut bytes2).unwrap();
        assert_eq!(bytes1, bytes2);

        let other = SynthConfig {
            seed: 18,
            ..desk_config()
        };
        let (_, r3) = synth_generate(&other).unwrap();
        assert_ne!(r1, r3);
    }

    #[test]
    fn synth_shapes_match_config() {
        let config = SynthConfig {
            n_topics: 1,
            n_runs: 2,
            ..desk_config()
        };
        let (judgments, runs) = synth_generate(&config).unwrap();
        assert_eq!(runs.len(), 2);
        assert_eq!(judgments.topic_count(), 1);
        for run in &runs {
            assert_eq!(run.topic_count(), 1);
            let topic = run.topics().next().unwrap().clone();
            assert_eq!(run.ranking(&topic).unwrap().len(), config.depth as usize);
        }
        assert_eq!(
            judgments.total_relevant(),
            u64::from(config.relevant_per_topic)
        );
    }

    #[test]
    fn synth_rejects_invalid_parameters() {
        assert!(synth_generate(&SynthConfig {
            n_topics: 0,
            ..desk_config()
        })
        .is_err());
        assert!(synth_generate(&SynthConfig {
            quality: 1.5,
            ..desk_config()
        })
        .is_err());
        assert!(synth_generate(&SynthConfig {
            relevant_per_topic: 30,
            ..desk_config()
        })
        .is_err());
        assert!(synth_generate(&SynthConfig {
            depth: 30,
            ..desk_config()
        })
        .is_err());
    }

    #[test]
    fn synth_quality_ladder_separates_runs() {
        let config = SynthConfig {
            n_topics: 60,
            relevant_per_topic: 3,
            corpus_size: 60,
            depth: 60,
            n_runs: 2,
            quality: 1.0,
            seed: 5,
        };
        let (judgments, runs) = synth_generate(&config).unwrap();
        let mean_rr = |run: &RunRanking| -> f64 {
            let mut sum = 0.0;
            for topic in judgments.topics() {
                let pv = position_vector(run, &judgments, topic).unwrap();
                sum += reciprocal_rank::<f64>(&pv);
            }
            sum / judgments.topic_count() as f64
        };
        // Run 0 sits at quality 0, run 1 at quality 1; the boosted run
        // must place relevant documents far higher on average.
        assert!(mean_rr(&runs[1]) > mean_rr(&runs[0]) + 0.2);
    }

    #[test]
    fn synth_uniform_quality_matches_tie_probability_law() {
        // At quality 0 the first relevant position follows the
        // closed-form arrangement distribution. Chi-square
        // goodness-of-fit against it, D=8, R=2, full-depth retrieval:
        // 7 bins, df=6, critical value 22.457744 at the 0.999 level.
        let config = SynthConfig {
            n_topics: 2_000,
            relevant_per_topic: 2,
            corpus_size: 8,
            depth: 8,
            n_runs: 1,
            quality: 0.0,
            seed: 99,
        };
        let (judgments, runs) = synth_generate(&config).unwrap();
        let mut observed = [0u32; 8];
        for topic in judgments.topics() {
            let pv = position_vector(&runs[0], &judgments, topic).unwrap();
            observed[pv.positions()[0] as usize - 1] += 1;
        }
        assert_eq!(observed[7], 0, "first of two relevant cannot sit last");
        let mut chi2 = 0.0;
        for r1 in 1..=7u64 {
            let p = tie_probability(8, 2, r1).unwrap().to_f64().unwrap();
            let expected = p * f64::from(config.n_topics);
            let diff = f64::from(observed[r1 as usize - 1]) - expected;
            chi2 += diff * diff / expected;
        }
        assert!(chi2 < 22.457744, "chi-square {chi2} too large");
    }
}
