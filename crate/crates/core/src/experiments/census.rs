//! Tie accounting over all run pairs and topics: how often methods
//! cannot distinguish a pair, where the ties sit, and how deep the
//! decisive level lies when there is one.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lexiprec::{decisive_level, sgn_lexiprecision};
use crate::model::{Judgments, PositionVector, RunRanking};

use super::PositionIndex;

/// Tie counter with its denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TieRate {
    pub ties: u64,
    pub total: u64,
}

impl TieRate {
    fn add(&mut self, other: TieRate) {
        self.ties += other.ties;
        self.total += other.total;
    }

    /// Tie percentage in `[0, 100]`, or `None` on an empty
    /// denominator.
    pub fn percentage(&self) -> Option<f64> {
        if self.total == 0 {
            None
        } else {
            Some(100.0 * self.ties as f64 / self.total as f64)
        }
    }
}

/// Tie statistics over every unordered run pair and every topic.
#[derive(Clone, Debug, Default)]
pub struct TieCensus {
    /// Number of (pair, topic) comparisons behind the headline rates.
    pub comparisons: u64,
    /// Ties under the reciprocal-rank difference at level 1.
    pub delta_rr1: TieRate,
    /// Ties under lexiprecision: identical position vectors.
    pub lexiprecision: TieRate,
    /// Level-1 tie rate conditioned on one side's first relevant
    /// position; key 0 stands for "no relevant document retrieved".
    /// Each comparison contributes one observation per side.
    pub by_first_position: BTreeMap<u32, TieRate>,
    /// Tie rate of the reciprocal-rank difference at each recall
    /// level; entry `i - 1` covers level `i`, with the denominator
    /// restricted to topics having at least `i` relevant documents.
    pub by_level: Vec<TieRate>,
}

impl TieCensus {
    fn merge(mut self, other: TieCensus) -> TieCensus {
        self.comparisons += other.comparisons;
        self.delta_rr1.add(other.delta_rr1);
        self.lexiprecision.add(other.lexiprecision);
        for (r, rate) in other.by_first_position {
            self.by_first_position.entry(r).or_default().add(rate);
        }
        if self.by_level.len() < other.by_level.len() {
            self.by_level.resize(other.by_level.len(), TieRate::default());
        }
        for (i, rate) in other.by_level.into_iter().enumerate() {
            self.by_level[i].add(rate);
        }
        self
    }

    fn observe(&mut self, x: &PositionVector, y: &PositionVector) {
        self.comparisons += 1;
        let rx = x.position_at_level(1).unwrap_or(0);
        let ry = y.position_at_level(1).unwrap_or(0);
        let level1_tie = rx == ry;

        self.delta_rr1.total += 1;
        self.lexiprecision.total += 1;
        if level1_tie {
            self.delta_rr1.ties += 1;
        }
        if x.positions() == y.positions() {
            self.lexiprecision.ties += 1;
        }

        for r in [rx, ry] {
            let rate = self.by_first_position.entry(r).or_default();
            rate.total += 1;
            if level1_tie {
                rate.ties += 1;
            }
        }

        let r_total = x.total_relevant();
        if self.by_level.len() < r_total as usize {
            self.by_level.resize(r_total as usize, TieRate::default());
        }
        for i in 1..=r_total {
            let rate = &mut self.by_level[(i - 1) as usize];
            rate.total += 1;
            if x.position_at_level(i) == y.position_at_level(i) {
                rate.ties += 1;
            }
        }
    }
}

fn require_pairs(index: &PositionIndex) -> Result<Vec<(usize, usize)>> {
    if index.n_runs() < 2 {
        return Err(Error::InsufficientData(format!(
            "pairwise analysis needs at least 2 runs, got {}",
            index.n_runs()
        )));
    }
    Ok(index.run_pairs())
}

/// Counts ties under level-1 reciprocal-rank difference and under
/// lexiprecision across all unordered run pairs and topics, along
/// with the conditional and per-level tie rates.
pub fn tie_census(runs: &[RunRanking], judgments: &Judgments) -> Result<TieCensus> {
    let index = PositionIndex::build(runs, judgments)?;
    let pairs = require_pairs(&index)?;
    let census = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut acc = TieCensus::default();
            for t in 0..index.n_topics() {
                acc.observe(index.vector(i, t), index.vector(j, t));
            }
            acc
        })
        .reduce(TieCensus::default, TieCensus::merge);
    Ok(census)
}

/// Empirical distribution of the decisive level over all run pairs
/// and topics that have one.
#[derive(Clone, Debug, Default)]
pub struct IstarEcdf {
    /// Occurrences per decisive level.
    pub counts: BTreeMap<u32, u64>,
    /// Comparisons with a decisive level.
    pub decided: u64,
    /// Comparisons without one (identical position vectors).
    pub ties: u64,
}

impl IstarEcdf {
    fn merge(mut self, other: IstarEcdf) -> IstarEcdf {
        for (level, n) in other.counts {
            *self.counts.entry(level).or_insert(0) += n;
        }
        self.decided += other.decided;
        self.ties += other.ties;
        self
    }

    /// Fraction of decided comparisons resolved at or before `level`;
    /// 0 when nothing was decided.
    pub fn cumulative_at(&self, level: u32) -> f64 {
        if self.decided == 0 {
            return 0.0;
        }
        let below: u64 = self
            .counts
            .range(..=level)
            .map(|(_, n)| *n)
            .sum();
        below as f64 / self.decided as f64
    }

    /// `(level, cumulative fraction)` rows at each observed level.
    pub fn points(&self) -> Vec<(u32, f64)> {
        let mut rows = Vec::with_capacity(self.counts.len());
        let mut seen = 0u64;
        for (&level, &n) in &self.counts {
            seen += n;
            rows.push((level, seen as f64 / self.decided as f64));
        }
        rows
    }
}

/// Distribution of the decisive level over all run pairs and topics.
pub fn istar_ecdf(runs: &[RunRanking], judgments: &Judgments) -> Result<IstarEcdf> {
    let index = PositionIndex::build(runs, judgments)?;
    let pairs = require_pairs(&index)?;
    let ecdf = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut acc = IstarEcdf::default();
            for t in 0..index.n_topics() {
                match decisive_level(index.vector(i, t), index.vector(j, t)).expect(
                    "index vectors of one topic share the relevant count",
                ) {
                    Some(level) => {
                        *acc.counts.entry(level).or_insert(0) += 1;
                        acc.decided += 1;
                    }
                    None => acc.ties += 1,
                }
            }
            acc
        })
        .reduce(IstarEcdf::default, IstarEcdf::merge);
    Ok(ecdf)
}

/// Agreement of suffix-based predictors with the level-1 preference.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MaskedPrefixAgreement {
    /// Comparisons with a nonzero level-1 preference (the target).
    pub qualifying: u64,
    /// Suffix lexiprecision matches the target.
    pub sgn_lp_agreements: u64,
    /// Suffix level-1 difference (the level-2 difference of the full
    /// vectors) matches the target.
    pub delta_rr2_agreements: u64,
}

impl MaskedPrefixAgreement {
    pub fn sgn_lp_percent(&self) -> Option<f64> {
        (self.qualifying > 0)
            .then(|| 100.0 * self.sgn_lp_agreements as f64 / self.qualifying as f64)
    }

    pub fn delta_rr2_percent(&self) -> Option<f64> {
        (self.qualifying > 0)
            .then(|| 100.0 * self.delta_rr2_agreements as f64 / self.qualifying as f64)
    }
}

/// Sign of the reciprocal-rank comparison of two first positions;
/// an absent first relevant item loses to a present one.
fn sgn_first(xs: &[u32], ys: &[u32]) -> i8 {
    match (xs.first(), ys.first()) {
        (None, None) => 0,
        (Some(_), None) => 1,
        (None, Some(_)) => -1,
        (Some(a), Some(b)) => {
            if a < b {
                1
            } else if a > b {
                -1
            } else {
                0
            }
        }
    }
}

/// Masks the top-ranked relevant item of each side and measures how
/// often the remaining positions alone predict the full level-1
/// preference, over comparisons where that preference is nonzero.
///
/// A tied suffix predicts 0 and counts as a disagreement: the target
/// is nonzero by construction, and crediting an abstention would
/// inflate both predictors equally.
pub fn masked_prefix_agreement(
    runs: &[RunRanking],
    judgments: &Judgments,
) -> Result<MaskedPrefixAgreement> {
    let index = PositionIndex::build(runs, judgments)?;
    let pairs = require_pairs(&index)?;
    let agreement = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut acc = MaskedPrefixAgreement::default();
            for t in 0..index.n_topics() {
                let x = index.vector(i, t);
                let y = index.vector(j, t);
                let target = sgn_first(x.positions(), y.positions());
                if target == 0 {
                    continue;
                }
                acc.qualifying += 1;
                let xs = x.positions().get(1..).unwrap_or(&[]);
                let ys = y.positions().get(1..).unwrap_or(&[]);
                let r = x.total_relevant() - 1;
                let sx = PositionVector::new(xs.to_vec(), r)
                    .expect("suffix of a valid position vector is valid");
                let sy = PositionVector::new(ys.to_vec(), r)
                    .expect("suffix of a valid position vector is valid");
                if sgn_lexiprecision(&sx, &sy).expect("suffixes share the relevant count")
                    == target
                {
                    acc.sgn_lp_agreements += 1;
                }
                if sgn_first(xs, ys) == target {
                    acc.delta_rr2_agreements += 1;
                }
            }
            acc
        })
        .reduce(MaskedPrefixAgreement::default, |mut a, b| {
            a.qualifying += b.qualifying;
            a.sgn_lp_agreements += b.sgn_lp_agreements;
            a.delta_rr2_agreements += b.delta_rr2_agreements;
            a
        });
    if agreement.qualifying == 0 {
        return Err(Error::InsufficientData(
            "no comparison has a nonzero level-1 preference".into(),
        ));
    }
    Ok(agreement)
}
