//! Label and query removal, and the agreement of degraded-data
//! preferences with full-data preferences.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lexiprec::sgn_lexiprecision;
use crate::model::{Id, Judgments, RunRanking};
use crate::rng::DetRng;
use crate::{BigRational, Rational};

use super::{preference_value, DegradationMode, ExperimentConfig, Method, PositionIndex};

fn validate_fraction(fraction: f64) -> Result<()> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(Error::InvalidParameter(format!(
            "removal fraction {fraction} outside [0, 1)"
        )));
    }
    Ok(())
}

/// Deletes `floor(fraction * total relevant labels)` relevance labels,
/// chosen uniformly without replacement across the whole collection.
///
/// Deleted labels vanish from the judgments, so the affected documents
/// are treated as non-relevant from then on. Labels below the
/// binarization threshold are never candidates. The candidate pool is
/// ordered by (topic, document), so a given `(judgments, fraction,
/// seed)` triple always removes the same labels.
pub fn degrade_labels(judgments: &Judgments, fraction: f64, seed: u64) -> Result<Judgments> {
    validate_fraction(fraction)?;
    let threshold = judgments.threshold();
    let rows = judgments.rows();
    let relevant_rows: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter(|(_, (_, _, grade))| *grade >= threshold)
        .map(|(i, _)| i)
        .collect();
    let n = relevant_rows.len() as u64;
    let k = (fraction * n as f64).floor() as u64;
    let mut rng = DetRng::new(seed);
    let removed: HashSet<usize> = rng
        .sample_without_replacement(n, k)
        .into_iter()
        .map(|i| relevant_rows[i as usize])
        .collect();
    Judgments::from_rows(
        rows.into_iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, row)| row),
        threshold,
    )
}

/// Variant of [`degrade_labels`] that removes `floor(fraction * R_t)`
/// labels independently within each topic.
///
/// One generator seeded with `seed` serves all topics, consumed in
/// lexicographic topic order, so the output is still a pure function
/// of `(judgments, fraction, seed)`.
pub fn degrade_labels_stratified(
    judgments: &Judgments,
    fraction: f64,
    seed: u64,
) -> Result<Judgments> {
    validate_fraction(fraction)?;
    let threshold = judgments.threshold();
    let mut rng = DetRng::new(seed);
    let mut removed: HashSet<(Id, Id)> = HashSet::new();
    for topic in judgments.topics() {
        let docs = judgments.relevant_docs(topic);
        let k = (fraction * docs.len() as f64).floor() as u64;
        for i in rng.sample_without_replacement(docs.len() as u64, k) {
            removed.insert((topic.clone(), docs[i as usize].clone()));
        }
    }
    Judgments::from_rows(
        judgments
            .rows()
            .into_iter()
            .filter(|(topic, doc, _)| !removed.contains(&(topic.clone(), doc.clone()))),
        threshold,
    )
}

/// Keeps a uniform random subset of topics, removing
/// `floor(fraction * n)` of them.
///
/// Topic ids are deduplicated and sorted before sampling, so the
/// result depends only on the set of ids, the fraction, and the seed.
pub fn degrade_queries(topics: &[Id], fraction: f64, seed: u64) -> Result<Vec<Id>> {
    validate_fraction(fraction)?;
    let mut sorted: Vec<Id> = topics.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(Error::InsufficientData("no topics to sample from".into()));
    }
    let n = sorted.len() as u64;
    let k = (fraction * n as f64).floor() as u64;
    let mut rng = DetRng::new(seed);
    let removed = rng.sample_without_replacement(n, k);
    let mut kept = Vec::with_capacity((n - k) as usize);
    let mut next_removed = removed.iter().copied().peekable();
    for (i, topic) in sorted.into_iter().enumerate() {
        if next_removed.peek() == Some(&(i as u64)) {
            next_removed.next();
        } else {
            kept.push(topic);
        }
    }
    debug_assert!(!kept.is_empty(), "fraction < 1 always leaves a topic");
    Ok(kept)
}

/// Which agreement a curve point measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgreementKind {
    /// Per-topic sign agreement with the full-data level-1 preference,
    /// over comparisons where that preference is nonzero.
    Ranking,
    /// Sign agreement of the per-pair mean preference with the
    /// full-data mean level-1 difference, over pairs where that mean
    /// is nonzero.
    System,
}

impl AgreementKind {
    pub fn name(self) -> &'static str {
        match self {
            AgreementKind::Ranking => "ranking",
            AgreementKind::System => "system",
        }
    }
}

impl std::fmt::Display for AgreementKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One (fraction, method, kind) cell of the agreement grid.
#[derive(Clone, Debug)]
pub struct AgreementPoint {
    pub fraction: f64,
    pub method: Method,
    pub kind: AgreementKind,
    /// Percent agreement of each sample; NaN marks a sample whose
    /// denominator was empty.
    pub samples: Vec<f64>,
    /// Mean over the defined samples, NaN when none were.
    pub mean: f64,
    /// Sample standard deviation over the defined samples; 0 for a
    /// single sample.
    pub std_dev: f64,
}

/// Full agreement grid of one degradation experiment.
#[derive(Clone, Debug)]
pub struct AgreementCurves {
    pub mode: DegradationMode,
    pub n_samples: u32,
    pub seed: u64,
    pub points: Vec<AgreementPoint>,
}

/// Per-sample agreement percentages, indexed by [`Method::ALL`]
/// order.
struct SampleOutcome {
    ranking: Option<[f64; 3]>,
    system: [f64; 3],
}

fn rat_sign(v: &Rational) -> i8 {
    match v.numer().cmp(&0) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

fn big_sign(v: &BigRational) -> i8 {
    if v.is_zero() {
        0
    } else if v.numer() < &BigInt::from(0) {
        -1
    } else {
        1
    }
}

fn to_big(v: Rational) -> BigRational {
    BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()))
}

fn percent(numer: u64, denom: u64) -> f64 {
    if denom == 0 {
        f64::NAN
    } else {
        100.0 * numer as f64 / denom as f64
    }
}

fn summarize(samples: &[f64]) -> (f64, f64) {
    let defined: Vec<f64> = samples.iter().copied().filter(|v| !v.is_nan()).collect();
    if defined.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = defined.len() as f64;
    let mean = defined.iter().sum::<f64>() / n;
    if defined.len() < 2 {
        return (mean, 0.0);
    }
    let var = defined.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Full-data reference: per-comparison level-1 signs and per-pair
/// mean level-1 signs.
struct Reference {
    /// `sign[pair * n_topics + topic]`.
    signs: Vec<i8>,
    mean_signs: Vec<i8>,
}

fn build_reference(index: &PositionIndex, pairs: &[(usize, usize)]) -> Result<Reference> {
    let n_topics = index.n_topics();
    let mut signs = vec![0i8; pairs.len() * n_topics];
    let mut mean_signs = vec![0i8; pairs.len()];
    for (p, &(i, j)) in pairs.iter().enumerate() {
        let mut sum = BigRational::zero();
        for t in 0..n_topics {
            let v = preference_value(Method::DeltaRr1, index.vector(i, t), index.vector(j, t))?;
            signs[p * n_topics + t] = rat_sign(&v);
            sum += to_big(v);
        }
        mean_signs[p] = big_sign(&sum);
    }
    Ok(Reference { signs, mean_signs })
}

/// Positions of `subset` ids within `full` ids; both must be sorted
/// and `subset` must be contained in `full`.
fn align(full: &[Id], subset: &[Id]) -> Vec<usize> {
    let mut out = Vec::with_capacity(subset.len());
    let mut cursor = 0;
    for id in subset {
        while full[cursor] != *id {
            cursor += 1;
        }
        out.push(cursor);
        cursor += 1;
    }
    out
}

/// Agreement of each sample: comparisons run over the surviving
/// topics of the degraded data, scored against the full-data
/// reference.
fn labels_sample(
    runs: &[RunRanking],
    judgments: &Judgments,
    index: &PositionIndex,
    pairs: &[(usize, usize)],
    reference: &Reference,
    fraction: f64,
    seed: u64,
) -> Result<SampleOutcome> {
    let degraded = degrade_labels(judgments, fraction, seed)?;
    let dindex = match PositionIndex::build(runs, &degraded) {
        Ok(ix) => ix,
        // Every topic lost its last relevant label: nothing is
        // comparable, so the sample is undefined rather than an error.
        Err(Error::InsufficientData(_)) => {
            return Ok(SampleOutcome {
                ranking: Some([f64::NAN; 3]),
                system: [f64::NAN; 3],
            })
        }
        Err(e) => return Err(e),
    };
    let full_topic_of = align(index.topics(), dindex.topics());
    let n_topics = index.n_topics();

    let mut rank_denom = 0u64;
    let mut rank_agree = [0u64; 2];
    let mut sys_denom = 0u64;
    let mut sys_agree = [0u64; 3];
    for (p, &(i, j)) in pairs.iter().enumerate() {
        let mut sum_drr1 = BigRational::zero();
        let mut sum_rrlp = BigRational::zero();
        let mut sum_sgn = 0i64;
        for (dt, &t) in full_topic_of.iter().enumerate() {
            let x = dindex.vector(i, dt);
            let y = dindex.vector(j, dt);
            let drr1 = preference_value(Method::DeltaRr1, x, y)?;
            let lexi = sgn_lexiprecision(x, y)?;
            let rrlp = preference_value(Method::RrLp, x, y)?;
            sum_drr1 += to_big(drr1);
            sum_rrlp += to_big(rrlp);
            sum_sgn += i64::from(lexi);

            let target = reference.signs[p * n_topics + t];
            if target == 0 {
                continue;
            }
            rank_denom += 1;
            if rat_sign(&drr1) == target {
                rank_agree[0] += 1;
            }
            if lexi == target {
                rank_agree[1] += 1;
            }
        }
        let target = reference.mean_signs[p];
        if target != 0 {
            sys_denom += 1;
            if big_sign(&sum_drr1) == target {
                sys_agree[0] += 1;
            }
            if big_sign(&sum_rrlp) == target {
                sys_agree[1] += 1;
            }
            if sum_sgn.signum() as i8 == target {
                sys_agree[2] += 1;
            }
        }
    }
    let lexi_pct = percent(rank_agree[1], rank_denom);
    Ok(SampleOutcome {
        ranking: Some([percent(rank_agree[0], rank_denom), lexi_pct, lexi_pct]),
        system: [
            percent(sys_agree[0], sys_denom),
            percent(sys_agree[1], sys_denom),
            percent(sys_agree[2], sys_denom),
        ],
    })
}

/// Agreement of one query-removal sample. The surviving topics keep
/// their full-data judgments, so per-topic preferences are unchanged
/// and only the per-pair means (system agreement) can move.
fn queries_sample(
    index: &PositionIndex,
    pairs: &[(usize, usize)],
    reference: &Reference,
    fraction: f64,
    seed: u64,
) -> Result<SampleOutcome> {
    let kept = degrade_queries(index.topics(), fraction, seed)?;
    let kept_idx = align(index.topics(), &kept);

    let mut sys_denom = 0u64;
    let mut sys_agree = [0u64; 3];
    for (p, &(i, j)) in pairs.iter().enumerate() {
        let target = reference.mean_signs[p];
        if target == 0 {
            continue;
        }
        let mut sum_drr1 = BigRational::zero();
        let mut sum_rrlp = BigRational::zero();
        let mut sum_sgn = 0i64;
        for &t in &kept_idx {
            let x = index.vector(i, t);
            let y = index.vector(j, t);
            sum_drr1 += to_big(preference_value(Method::DeltaRr1, x, y)?);
            sum_rrlp += to_big(preference_value(Method::RrLp, x, y)?);
            sum_sgn += i64::from(sgn_lexiprecision(x, y)?);
        }
        sys_denom += 1;
        if big_sign(&sum_drr1) == target {
            sys_agree[0] += 1;
        }
        if big_sign(&sum_rrlp) == target {
            sys_agree[1] += 1;
        }
        if sum_sgn.signum() as i8 == target {
            sys_agree[2] += 1;
        }
    }
    Ok(SampleOutcome {
        ranking: None,
        system: [
            percent(sys_agree[0], sys_denom),
            percent(sys_agree[1], sys_denom),
            percent(sys_agree[2], sys_denom),
        ],
    })
}

/// Measures, per removal fraction and sample, how well preferences on
/// degraded data agree with the full-data level-1 preferences.
///
/// Ranking agreement follows the per-topic signs and is only defined
/// for label removal: removing whole queries leaves every surviving
/// per-topic preference identical, so those rows are omitted. System
/// agreement compares signs of per-pair mean preferences, computed
/// exactly.
///
/// Per-sample seeds are drawn from `config.seed` in a fixed order
/// (fractions outer, samples inner), so any single cell can be
/// reproduced from the master seed.
pub fn agreement_under_degradation(
    runs: &[RunRanking],
    judgments: &Judgments,
    mode: DegradationMode,
    config: &ExperimentConfig,
) -> Result<AgreementCurves> {
    config.validate()?;
    let index = PositionIndex::build(runs, judgments)?;
    if index.n_runs() < 2 {
        return Err(Error::InsufficientData(format!(
            "degradation agreement needs at least 2 runs, got {}",
            index.n_runs()
        )));
    }
    let pairs = index.run_pairs();
    let reference = build_reference(&index, &pairs)?;

    let mut master = DetRng::new(config.seed);
    let seeds: Vec<Vec<u64>> = config
        .fractions
        .iter()
        .map(|_| (0..config.n_samples).map(|_| master.subseed()).collect())
        .collect();

    let outcomes: Vec<Vec<SampleOutcome>> = config
        .fractions
        .par_iter()
        .zip(&seeds)
        .map(|(&fraction, sample_seeds)| {
            sample_seeds
                .par_iter()
                .map(|&seed| match mode {
                    DegradationMode::Labels => labels_sample(
                        runs, judgments, &index, &pairs, &reference, fraction, seed,
                    ),
                    DegradationMode::Queries => {
                        queries_sample(&index, &pairs, &reference, fraction, seed)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut points = Vec::new();
    for (fi, &fraction) in config.fractions.iter().enumerate() {
        let kinds: &[AgreementKind] = match mode {
            DegradationMode::Labels => &[AgreementKind::Ranking, AgreementKind::System],
            DegradationMode::Queries => &[AgreementKind::System],
        };
        for &kind in kinds {
            for (m, method) in Method::ALL.into_iter().enumerate() {
                let samples: Vec<f64> = outcomes[fi]
                    .iter()
                    .map(|o| match kind {
                        AgreementKind::Ranking => o.ranking.expect("labels mode has ranking")[m],
                        AgreementKind::System => o.system[m],
                    })
                    .collect();
                let (mean, std_dev) = summarize(&samples);
                points.push(AgreementPoint {
                    fraction,
                    method,
                    kind,
                    samples,
                    mean,
                    std_dev,
                });
            }
        }
    }
    Ok(AgreementCurves {
        mode,
        n_samples: config.n_samples,
        seed: config.seed,
        points,
    })
}
