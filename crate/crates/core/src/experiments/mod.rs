//! Drivers for the empirical analyses: tie census, decisive-level
//! distribution, masked-prefix agreement, label and query
//! degradation, backoff correlation and regression, and
//! discriminative power.
//!
//! Every experiment is a pure function of its inputs and an explicit
//! seed: repeated invocations produce identical results, and parallel
//! execution only ever reorders work whose aggregation is exact, so
//! thread counts cannot change any output.

mod backoff;
mod census;
mod degradation;
mod power;

pub use backoff::{backoff_analysis, backoff_from_deltas, BackoffAnalysis, Regression};
pub use census::{
    istar_ecdf, masked_prefix_agreement, tie_census, IstarEcdf, MaskedPrefixAgreement, TieCensus,
    TieRate,
};
pub use degradation::{
    agreement_under_degradation, degrade_labels, degrade_labels_stratified, degrade_queries,
    AgreementCurves, AgreementKind, AgreementPoint,
};
pub use power::{discriminative_power, pseudo_scores, rr_matrix, DiscriminativePower, PairOutcome, SigTest};

use crate::error::{Error, Result};
use crate::lexiprec::{rr_lexiprecision, sgn_lexiprecision};
use crate::metrics::delta_rr;
use crate::model::{position_vector, Id, Judgments, PositionVector, RunRanking};
use crate::Rational;

/// Preference method under evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    /// Reciprocal-rank difference at recall level 1 (equivalently,
    /// plain reciprocal rank when a per-system score is needed).
    DeltaRr1,
    /// Lexiprecision with the reciprocal-rank difference at the
    /// decisive level as magnitude.
    RrLp,
    /// Lexiprecision reduced to the sign at the decisive level.
    SgnLp,
}

impl Method {
    /// All methods, in the fixed order used for report rows.
    pub const ALL: [Method; 3] = [Method::DeltaRr1, Method::RrLp, Method::SgnLp];

    /// Stable lowercase name used in reports and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Method::DeltaRr1 => "delta-rr1",
            Method::RrLp => "rrlp",
            Method::SgnLp => "sgnlp",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// What a degradation experiment removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegradationMode {
    /// Relevance labels are deleted; affected items become
    /// non-relevant.
    Labels,
    /// Whole topics are deleted from the evaluation.
    Queries,
}

impl DegradationMode {
    pub fn name(self) -> &'static str {
        match self {
            DegradationMode::Labels => "labels",
            DegradationMode::Queries => "queries",
        }
    }
}

impl std::fmt::Display for DegradationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Shared knobs of the degradation experiments.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// Primary magnitude scheme, echoed into reports.
    pub method: Method,
    /// Removal fractions to evaluate, each in `[0, 1)`.
    pub fractions: Vec<f64>,
    /// Independent samples per fraction.
    pub n_samples: u32,
    /// Master seed; per-sample seeds are derived from it in a fixed
    /// order, so the full grid is reproducible from this one value.
    pub seed: u64,
    /// Significance level where one is needed.
    pub alpha: f64,
    /// Relevance binarization threshold, echoed into reports.
    pub threshold: u32,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            method: Method::RrLp,
            fractions: Vec::new(),
            n_samples: 10,
            seed: 0,
            alpha: 0.05,
            threshold: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        for &f in &self.fractions {
            if !(0.0..1.0).contains(&f) {
                return Err(Error::InvalidParameter(format!(
                    "removal fraction {f} outside [0, 1)"
                )));
            }
        }
        if self.n_samples < 1 {
            return Err(Error::InvalidParameter("n_samples must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha {} outside (0, 1)",
                self.alpha
            )));
        }
        if self.threshold < 1 {
            return Err(Error::InvalidParameter("threshold must be at least 1".into()));
        }
        Ok(())
    }
}

/// Position vectors for every (run, topic) cell, computed once and
/// shared by all pairwise passes.
///
/// Runs are held in lexicographic tag order and topics in
/// lexicographic id order, which fixes the iteration order of every
/// experiment. Topics without any relevant document are excluded:
/// no preference is defined on them.
pub struct PositionIndex {
    tags: Vec<String>,
    topics: Vec<Id>,
    vectors: Vec<Vec<PositionVector>>,
}

impl PositionIndex {
    pub fn build(runs: &[RunRanking], judgments: &Judgments) -> Result<Self> {
        if runs.is_empty() {
            return Err(Error::InsufficientData("no runs to index".into()));
        }
        let mut order: Vec<usize> = (0..runs.len()).collect();
        order.sort_by(|&a, &b| runs[a].run_tag().cmp(runs[b].run_tag()));
        for w in order.windows(2) {
            if runs[w[0]].run_tag() == runs[w[1]].run_tag() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate run tag {:?}",
                    runs[w[0]].run_tag()
                )));
            }
        }
        let topics: Vec<Id> = judgments
            .topics()
            .filter(|t| judgments.relevant_count(t).unwrap_or(0) > 0)
            .cloned()
            .collect();
        if topics.is_empty() {
            return Err(Error::InsufficientData(
                "no topics with relevant documents".into(),
            ));
        }
        let mut tags = Vec::with_capacity(runs.len());
        let mut vectors = Vec::with_capacity(runs.len());
        for &r in &order {
            let run = &runs[r];
            tags.push(run.run_tag().to_string());
            let per_topic: Result<Vec<PositionVector>> = topics
                .iter()
                .map(|t| position_vector(run, judgments, t))
                .collect();
            vectors.push(per_topic?);
        }
        Ok(PositionIndex {
            tags,
            topics,
            vectors,
        })
    }

    pub fn n_runs(&self) -> usize {
        self.tags.len()
    }

    pub fn n_topics(&self) -> usize {
        self.topics.len()
    }

    /// Run tags in index order (lexicographic).
    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    /// Topic ids in index order (lexicographic).
    pub fn topics(&self) -> &[Id] {
        &self.topics
    }

    pub fn vector(&self, run: usize, topic: usize) -> &PositionVector {
        &self.vectors[run][topic]
    }

    /// All unordered run pairs `(i, j)` with `i < j`, in lexicographic
    /// tag order.
    pub fn run_pairs(&self) -> Vec<(usize, usize)> {
        let k = self.n_runs();
        let mut pairs = Vec::with_capacity(k * (k.max(1) - 1) / 2);
        for i in 0..k {
            for j in (i + 1)..k {
                pairs.push((i, j));
            }
        }
        pairs
    }
}

/// Per-topic preference value of `x` over `y` under a method, as an
/// exact rational.
pub fn preference_value(method: Method, x: &PositionVector, y: &PositionVector) -> Result<Rational> {
    match method {
        Method::DeltaRr1 => delta_rr(x, y, 1),
        Method::RrLp => rr_lexiprecision(x, y),
        Method::SgnLp => Ok(Rational::from_integer(i64::from(sgn_lexiprecision(x, y)?))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RunRanking;
    use std::collections::BTreeMap;
    use std::sync::Arc;

    fn run(tag: &str, topics: &[(&str, &[&str])]) -> RunRanking {
        let map: BTreeMap<Id, Vec<Id>> = topics
            .iter()
            .map(|(t, docs)| {
                (
                    Arc::from(*t),
                    docs.iter().map(|d| Arc::from(*d)).collect(),
                )
            })
            .collect();
        RunRanking::from_topics(tag, map).unwrap()
    }

    fn judgments(rows: &[(&str, &str, u32)]) -> Judgments {
        Judgments::from_rows(
            rows.iter()
                .map(|(t, d, g)| (Arc::from(*t) as Id, Arc::from(*d) as Id, *g)),
            1,
        )
        .unwrap()
    }

    #[test]
    fn index_sorts_runs_and_skips_barren_topics() {
        let runs = vec![
            run("zeta", &[("t1", &["d1", "d2"])]),
            run("alpha", &[("t1", &["d2", "d1"])]),
        ];
        let judg = judgments(&[("t1", "d1", 1), ("t2", "d9", 0)]);
        let index = PositionIndex::build(&runs, &judg).unwrap();
        assert_eq!(index.tags(), &["alpha".to_string(), "zeta".to_string()]);
        assert_eq!(index.n_topics(), 1);
        assert_eq!(index.vector(0, 0).positions(), &[2]);
        assert_eq!(index.vector(1, 0).positions(), &[1]);
        assert_eq!(index.run_pairs(), vec![(0, 1)]);
    }

    #[test]
    fn index_rejects_duplicate_tags_and_empty_input() {
        let runs = vec![
            run("same", &[("t1", &["d1"])]),
            run("same", &[("t1", &["d2"])]),
        ];
        let judg = judgments(&[("t1", "d1", 1)]);
        assert!(matches!(
            PositionIndex::build(&runs, &judg),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            PositionIndex::build(&[], &judg),
            Err(Error::InsufficientData(_))
        ));
        let barren = judgments(&[("t1", "d1", 0)]);
        let one = vec![run("a", &[("t1", &["d1"])])];
        assert!(matches!(
            PositionIndex::build(&one, &barren),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn config_validation_catches_bad_fields() {
        let mut config = ExperimentConfig::default();
        assert!(config.validate().is_ok());
        config.fractions = vec![0.0, 0.5, 1.0];
        assert!(config.validate().is_err());
        config.fractions = vec![0.0, 0.5];
        config.n_samples = 0;
        assert!(config.validate().is_err());
        config.n_samples = 1;
        config.alpha = 0.0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn preference_values_agree_with_their_definitions() {
        let x = PositionVector::new(vec![1, 3], 2).unwrap();
        let y = PositionVector::new(vec![1, 4], 2).unwrap();
        assert_eq!(
            preference_value(Method::DeltaRr1, &x, &y).unwrap(),
            Rational::new(0, 1)
        );
        assert_eq!(
            preference_value(Method::RrLp, &x, &y).unwrap(),
            Rational::new(1, 3) - Rational::new(1, 4)
        );
        assert_eq!(
            preference_value(Method::SgnLp, &x, &y).unwrap(),
            Rational::from_integer(1)
        );
    }
}
