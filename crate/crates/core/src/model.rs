//! Core domain types: judgments, run rankings, position vectors, and
//! pairwise preferences.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Interned identifier for topics and documents.
///
/// Benchmarks repeat the same identifiers millions of times across
/// runs, so identifiers are shared `Arc<str>` values produced by an
/// [`Interner`].
pub type Id = Arc<str>;

/// Deduplicating store for identifier strings.
#[derive(Debug, Default)]
pub struct Interner {
    table: HashSet<Arc<str>>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns a shared handle for `s`, allocating at most once per
    /// distinct string.
    pub fn intern(&mut self, s: &str) -> Id {
        if let Some(found) = self.table.get(s) {
            Arc::clone(found)
        } else {
            let arc: Arc<str> = Arc::from(s);
            self.table.insert(Arc::clone(&arc));
            arc
        }
    }

    /// Number of distinct strings interned so far.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct TopicJudgments {
    grades: HashMap<Id, u32>,
    relevant: u32,
}

impl TopicJudgments {
    fn recount(&mut self, threshold: u32) {
        self.relevant = self.grades.values().filter(|&&g| g >= threshold).count() as u32;
    }
}

/// Graded relevance judgments for a collection, with a binarization
/// policy: a document counts as relevant when its grade is at least
/// the binarization threshold.
///
/// The default threshold is 1 (any positive grade is relevant). Some
/// benchmarks conventionally binarize at grade 2 instead; the
/// threshold is configurable for that reason, via
/// [`Judgments::with_threshold`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgments {
    topics: BTreeMap<Id, TopicJudgments>,
    threshold: u32,
}

impl Judgments {
    /// Builds judgments from `(topic, document, grade)` rows.
    ///
    /// Errors on a repeated `(topic, document)` pair or a threshold of
    /// zero (a zero threshold would make every judged document
    /// relevant, including explicitly non-relevant ones).
    pub fn from_rows<I>(rows: I, threshold: u32) -> Result<Self>
    where
        I: IntoIterator<Item = (Id, Id, u32)>,
    {
        if threshold == 0 {
            return Err(Error::InvalidParameter(
                "binarization threshold must be at least 1".into(),
            ));
        }
        let mut topics: BTreeMap<Id, TopicJudgments> = BTreeMap::new();
        for (topic, doc, grade) in rows {
            let entry = topics.entry(Arc::clone(&topic)).or_default();
            if entry.grades.insert(Arc::clone(&doc), grade).is_some() {
                return Err(Error::DuplicateDocument {
                    topic: topic.to_string(),
                    doc: doc.to_string(),
                });
            }
        }
        for tj in topics.values_mut() {
            tj.recount(threshold);
        }
        Ok(Self { topics, threshold })
    }

    /// The same graded judgments under a different binarization
    /// threshold.
    pub fn with_threshold(&self, threshold: u32) -> Result<Self> {
        if threshold == 0 {
            return Err(Error::InvalidParameter(
                "binarization threshold must be at least 1".into(),
            ));
        }
        let mut topics = self.topics.clone();
        for tj in topics.values_mut() {
            tj.recount(threshold);
        }
        Ok(Self { topics, threshold })
    }

    /// Current binarization threshold.
    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    /// Topics in lexicographic order.
    pub fn topics(&self) -> impl Iterator<Item = &Id> {
        self.topics.keys()
    }

    pub fn topic_count(&self) -> usize {
        self.topics.len()
    }

    pub fn contains_topic(&self, topic: &str) -> bool {
        self.topics.contains_key(topic)
    }

    /// Grade recorded for `(topic, document)`, if any.
    pub fn grade(&self, topic: &str, doc: &str) -> Option<u32> {
        self.topics.get(topic)?.grades.get(doc).copied()
    }

    /// Whether the document's grade meets the threshold.
    pub fn is_relevant(&self, topic: &str, doc: &str) -> bool {
        self.grade(topic, doc).is_some_and(|g| g >= self.threshold)
    }

    /// Number of relevant documents R for the topic, or `None` when
    /// the topic has no judgments at all.
    pub fn relevant_count(&self, topic: &str) -> Option<u32> {
        self.topics.get(topic).map(|tj| tj.relevant)
    }

    /// Relevant documents of one topic in lexicographic order.
    pub fn relevant_docs(&self, topic: &str) -> Vec<Id> {
        let Some(tj) = self.topics.get(topic) else {
            return Vec::new();
        };
        let mut docs: Vec<Id> = tj
            .grades
            .iter()
            .filter(|(_, &g)| g >= self.threshold)
            .map(|(d, _)| Arc::clone(d))
            .collect();
        docs.sort_unstable();
        docs
    }

    /// All `(topic, document, grade)` rows, topics and documents in
    /// lexicographic order.
    pub fn rows(&self) -> Vec<(Id, Id, u32)> {
        let mut out = Vec::new();
        for (topic, tj) in &self.topics {
            let mut docs: Vec<(&Id, &u32)> = tj.grades.iter().collect();
            docs.sort_unstable_by(|a, b| a.0.cmp(b.0));
            for (doc, grade) in docs {
                out.push((Arc::clone(topic), Arc::clone(doc), *grade));
            }
        }
        out
    }

    /// Total number of relevant labels across topics.
    pub fn total_relevant(&self) -> u64 {
        self.topics.values().map(|tj| u64::from(tj.relevant)).sum()
    }

    /// Judgments restricted to the given topics.
    pub fn retain_topics(&self, keep: &HashSet<Id>) -> Self {
        let topics = self
            .topics
            .iter()
            .filter(|(t, _)| keep.contains(*t))
            .map(|(t, tj)| (Arc::clone(t), tj.clone()))
            .collect();
        Self {
            topics,
            threshold: self.threshold,
        }
    }
}

/// One system's ranked output: an ordered document list per topic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRanking {
    run_tag: String,
    topics: BTreeMap<Id, Vec<Id>>,
    depth: u32,
}

impl RunRanking {
    /// Builds a run from per-topic ordered document lists, rejecting
    /// duplicate documents within a topic.
    pub fn from_topics(run_tag: impl Into<String>, topics: BTreeMap<Id, Vec<Id>>) -> Result<Self> {
        let run_tag = run_tag.into();
        let mut depth = 0u32;
        for (topic, docs) in &topics {
            let mut seen: HashSet<&str> = HashSet::with_capacity(docs.len());
            for doc in docs {
                if !seen.insert(doc) {
                    return Err(Error::DuplicateDocument {
                        topic: topic.to_string(),
                        doc: doc.to_string(),
                    });
                }
            }
            depth = depth.max(docs.len() as u32);
        }
        Ok(Self {
            run_tag,
            topics,
            depth,
        })
    }

    pub fn run_tag(&self) -> &str {
        &self.run_tag
    }

    /// Maximum retrieval depth across topics.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Topics in lexicographic order.
    pub fn topics(&self) -> impl Iterator<Item = &Id> {
        self.topics.keys()
    }

    pub fn topic_count(&self) -> usize {
        self.topics.len()
    }

    /// Ordered documents for a topic; `None` when the run skipped it.
    pub fn ranking(&self, topic: &str) -> Option<&[Id]> {
        self.topics.get(topic).map(Vec::as_slice)
    }
}

/// Sorted 1-based rank positions of the retrieved relevant documents
/// for one (system, topic), together with the total relevant count R.
///
/// Relevant documents the system did not retrieve are represented by
/// absence: semantically their position is beyond the retrieval depth
/// and their reciprocal-rank utility is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositionVector {
    positions: Vec<u32>,
    total_relevant: u32,
}

impl PositionVector {
    /// Validates strict increase, 1-based positions, and the length
    /// bound `positions.len() <= total_relevant`.
    pub fn new(positions: Vec<u32>, total_relevant: u32) -> Result<Self> {
        if positions.len() as u64 > u64::from(total_relevant) {
            return Err(Error::InvalidParameter(format!(
                "{} positions exceed total relevant count {}",
                positions.len(),
                total_relevant
            )));
        }
        let mut prev = 0u32;
        for &p in &positions {
            if p == 0 {
                return Err(Error::InvalidParameter(
                    "rank positions are 1-based".into(),
                ));
            }
            if p <= prev {
                return Err(Error::InvalidParameter(format!(
                    "positions must be strictly increasing, saw {p} after {prev}"
                )));
            }
            prev = p;
        }
        Ok(Self {
            positions,
            total_relevant,
        })
    }

    /// Rank positions in increasing order.
    pub fn positions(&self) -> &[u32] {
        &self.positions
    }

    /// Total number of relevant documents R for the topic.
    pub fn total_relevant(&self) -> u32 {
        self.total_relevant
    }

    /// Number of relevant documents actually retrieved.
    pub fn retrieved(&self) -> u32 {
        self.positions.len() as u32
    }

    /// Rank of the document at recall level `i` (1-based), or `None`
    /// when that level was not retrieved. Levels outside `[1, R]` also
    /// yield `None`; callers that must reject them do so explicitly.
    pub fn position_at_level(&self, i: u32) -> Option<u32> {
        if i == 0 || i > self.total_relevant {
            return None;
        }
        self.positions.get(i as usize - 1).copied()
    }
}

/// Outcome of comparing two rankings: the decisive recall level, the
/// sign of the utility difference there, and its magnitude.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preference<V> {
    istar: Option<u32>,
    sign: i8,
    magnitude: V,
}

impl<V: Scalar> Preference<V> {
    /// A tie: no recall level distinguishes the rankings.
    pub fn tie() -> Self {
        Self {
            istar: None,
            sign: 0,
            magnitude: V::zero(),
        }
    }

    /// A decided comparison at level `istar` with nonzero `magnitude`;
    /// the sign is derived from the magnitude.
    pub fn decided(istar: u32, magnitude: V) -> Self {
        let sign = if magnitude > V::zero() {
            1
        } else if magnitude < V::zero() {
            -1
        } else {
            panic!("decided preference requires nonzero magnitude")
        };
        Self {
            istar: Some(istar),
            sign,
            magnitude,
        }
    }

    /// Decisive recall level, `None` for a tie.
    pub fn istar(&self) -> Option<u32> {
        self.istar
    }

    /// Sign of the preference: -1, 0, or +1.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Signed magnitude (the reciprocal-rank difference at the
    /// decisive level).
    pub fn magnitude(&self) -> &V {
        &self.magnitude
    }

    pub fn is_tie(&self) -> bool {
        self.istar.is_none()
    }
}

/// Ranks of the relevant documents of one topic within one run's
/// ordering, as 1-based positions sorted ascending, plus the topic's
/// total relevant count.
///
/// Topics absent from the run are treated as empty rankings, so every
/// relevant document counts as unretrieved there.
pub fn position_vector(
    run: &RunRanking,
    judgments: &Judgments,
    topic: &str,
) -> Result<PositionVector> {
    let Some(total_relevant) = judgments.relevant_count(topic) else {
        return Err(Error::UnknownTopic {
            topic: topic.to_string(),
        });
    };
    let ranking = run.ranking(topic).unwrap_or(&[]);
    let positions: Vec<u32> = ranking
        .iter()
        .enumerate()
        .filter(|(_, doc)| judgments.is_relevant(topic, doc))
        .map(|(idx, _)| idx as u32 + 1)
        .collect();
    PositionVector::new(positions, total_relevant)
}

/// One scored submission row for a single topic.
#[derive(Clone, Debug)]
pub struct ScoredDoc {
    pub doc: Id,
    pub rank: i64,
    pub score: f64,
}

/// How to turn a topic's scored rows into an ordered document list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SubmissionOrder {
    /// Score descending, ties broken by document identifier
    /// descending: the convention of the standard evaluation tool,
    /// which ignores the submitted rank field.
    #[default]
    ScoreThenDoc,
    /// Trust the submitted rank field (ascending); equal ranks fall
    /// back to document identifier descending so the result is still
    /// deterministic.
    SubmittedRank,
}

/// Orders one topic's scored rows into the ranking used for
/// evaluation.
pub fn order_submission(
    topic: &str,
    rows: &[ScoredDoc],
    order: SubmissionOrder,
) -> Result<Vec<Id>> {
    let mut seen: HashSet<&str> = HashSet::with_capacity(rows.len());
    for row in rows {
        if !seen.insert(&row.doc) {
            return Err(Error::DuplicateDocument {
                topic: topic.to_string(),
                doc: row.doc.to_string(),
            });
        }
    }
    let mut sorted: Vec<&ScoredDoc> = rows.iter().collect();
    match order {
        SubmissionOrder::ScoreThenDoc => {
            sorted.sort_by(|a, b| {
                b.score
                    .total_cmp(&a.score)
                    .then_with(|| b.doc.cmp(&a.doc))
            });
        }
        SubmissionOrder::SubmittedRank => {
            sorted.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| b.doc.cmp(&a.doc)));
        }
    }
    Ok(sorted.into_iter().map(|r| Arc::clone(&r.doc)).collect())
}
