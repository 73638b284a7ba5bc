//! Discriminative power: how many run pairs a method separates with
//! statistical significance.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::reciprocal_rank;
use crate::model::{Judgments, RunRanking};
use crate::stats::{bonferroni, paired_t_test, sign_test, tukey_hsd};

use super::{preference_value, Method, PositionIndex};

/// Significance test family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigTest {
    /// Tukey's honestly significant difference over a systems-by-topics
    /// matrix; familywise control is built in.
    Hsd,
    /// Per-pair paired test (t-test on magnitudes, exact sign test on
    /// signs) with Bonferroni correction across pairs.
    Paired,
}

impl SigTest {
    pub fn name(self) -> &'static str {
        match self {
            SigTest::Hsd => "hsd",
            SigTest::Paired => "paired",
        }
    }
}

impl std::fmt::Display for SigTest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Decision for one run pair.
#[derive(Clone, Debug)]
pub struct PairOutcome {
    pub run_a: String,
    pub run_b: String,
    /// Test statistic: studentized range for HSD, t for the paired
    /// t-test, positive count for the sign test.
    pub statistic: f64,
    /// Familywise p-value: the HSD grid p, or the Bonferroni-corrected
    /// paired p.
    pub p_value: f64,
    pub significant: bool,
}

/// All pairwise decisions of one (method, test) combination.
#[derive(Clone, Debug)]
pub struct DiscriminativePower {
    pub method: Method,
    pub test: SigTest,
    pub alpha: f64,
    /// Pairs in lexicographic run-tag order.
    pub pairs: Vec<PairOutcome>,
}

impl DiscriminativePower {
    pub fn significant_count(&self) -> u64 {
        self.pairs.iter().filter(|p| p.significant).count() as u64
    }

    /// Percentage of pairs separated at the requested level.
    pub fn percent_significant(&self) -> f64 {
        100.0 * self.significant_count() as f64 / self.pairs.len() as f64
    }
}

/// Plain reciprocal-rank score matrix, runs by topics.
pub fn rr_matrix(index: &PositionIndex) -> Vec<Vec<f64>> {
    (0..index.n_runs())
        .map(|r| {
            (0..index.n_topics())
                .map(|t| reciprocal_rank::<f64>(index.vector(r, t)))
                .collect()
        })
        .collect()
}

/// Per-system pseudo-score matrix for a pairwise preference method:
/// each system's score on a topic is its mean preference against all
/// other systems on that topic.
///
/// For the level-1 difference this reduces to the reciprocal-rank
/// matrix shifted by a per-topic constant and scaled by `k/(k-1)`,
/// neither of which moves any HSD decision, so HSD on these
/// pseudo-scores generalizes standard HSD to methods without a
/// per-system metric.
pub fn pseudo_scores(index: &PositionIndex, method: Method) -> Result<Vec<Vec<f64>>> {
    let k = index.n_runs();
    if k < 2 {
        return Err(Error::InsufficientData(format!(
            "pseudo-scores need at least 2 runs, got {k}"
        )));
    }
    let columns: Vec<Vec<f64>> = (0..index.n_topics())
        .into_par_iter()
        .map(|t| {
            let mut column = vec![0.0f64; k];
            for i in 0..k {
                for j in (i + 1)..k {
                    let v = preference_value(method, index.vector(i, t), index.vector(j, t))
                        .expect("level 1 exists on every indexed topic");
                    let v = *v.numer() as f64 / *v.denom() as f64;
                    column[i] += v;
                    column[j] -= v;
                }
            }
            Ok(column)
        })
        .collect::<Result<_>>()?;
    let mut scores = vec![vec![0.0f64; index.n_topics()]; k];
    for (t, column) in columns.iter().enumerate() {
        for (r, &v) in column.iter().enumerate() {
            scores[r][t] = v / (k - 1) as f64;
        }
    }
    Ok(scores)
}

/// Fraction of run pairs a method separates significantly, with the
/// per-pair decisions.
///
/// Identical runs produce all-zero differences and are never
/// significant: the t-test reports p = 1 on a zero sample, and a sign
/// test without any nonzero sign is treated the same way.
pub fn discriminative_power(
    runs: &[RunRanking],
    judgments: &Judgments,
    method: Method,
    test: SigTest,
    alpha: f64,
) -> Result<DiscriminativePower> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} outside (0, 1)"
        )));
    }
    let index = PositionIndex::build(runs, judgments)?;
    if index.n_runs() < 2 {
        return Err(Error::InsufficientData(format!(
            "discriminative power needs at least 2 runs, got {}",
            index.n_runs()
        )));
    }
    let pairs = index.run_pairs();

    let outcomes = match test {
        SigTest::Hsd => {
            let matrix = match method {
                Method::DeltaRr1 => rr_matrix(&index),
                Method::RrLp | Method::SgnLp => pseudo_scores(&index, method)?,
            };
            tukey_hsd(&matrix, alpha)?
                .into_iter()
                .map(|h| PairOutcome {
                    run_a: index.tags()[h.system_a].clone(),
                    run_b: index.tags()[h.system_b].clone(),
                    statistic: h.statistic,
                    p_value: h.p_value,
                    significant: h.significant,
                })
                .collect()
        }
        SigTest::Paired => {
            let raw: Vec<(f64, f64)> = pairs
                .par_iter()
                .map(|&(i, j)| {
                    let values: Result<Vec<_>> = (0..index.n_topics())
                        .map(|t| preference_value(method, index.vector(i, t), index.vector(j, t)))
                        .collect();
                    let values = values?;
                    match method {
                        Method::DeltaRr1 | Method::RrLp => {
                            let diffs: Vec<f64> = values
                                .iter()
                                .map(|v| *v.numer() as f64 / *v.denom() as f64)
                                .collect();
                            let r = paired_t_test(&diffs)?;
                            Ok((r.statistic, r.p_value))
                        }
                        Method::SgnLp => {
                            let n_pos = values.iter().filter(|v| *v.numer() > 0).count() as u64;
                            let n_neg = values.iter().filter(|v| *v.numer() < 0).count() as u64;
                            if n_pos + n_neg == 0 {
                                return Ok((0.0, 1.0));
                            }
                            let r = sign_test(n_pos, n_neg)?;
                            Ok((r.statistic, r.p_value))
                        }
                    }
                })
                .collect::<Result<_>>()?;
            let corrected = bonferroni(&raw.iter().map(|(_, p)| *p).collect::<Vec<_>>());
            pairs
                .iter()
                .zip(raw)
                .zip(corrected)
                .map(|((&(i, j), (statistic, _)), p_value)| PairOutcome {
                    run_a: index.tags()[i].clone(),
                    run_b: index.tags()[j].clone(),
                    statistic,
                    p_value,
                    significant: p_value < alpha,
                })
                .collect()
        }
    };

    Ok(DiscriminativePower {
        method,
        test,
        alpha,
        pairs: outcomes,
    })
}
