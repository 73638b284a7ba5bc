//! Correlation and regression structure of reciprocal-rank
//! differences across recall levels: how much a deeper level tells
//! about a shallower one.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Judgments, PositionVector, RunRanking};
use crate::stats::{ols, pearson};

use super::PositionIndex;

/// Deepest response level fitted by the regression pass.
const REGRESSION_LEVELS: u32 = 4;

/// One fitted model: the level-`level` difference regressed on the
/// differences at the next `horizon` levels.
#[derive(Clone, Debug)]
pub struct Regression {
    pub level: u32,
    /// Intercept first, then one coefficient per predictor level
    /// `level + 1 ..= level + horizon`.
    pub coefficients: Vec<f64>,
    /// Observations behind the fit.
    pub n: usize,
}

/// Correlation grid and backoff regressions.
#[derive(Clone, Debug)]
pub struct BackoffAnalysis {
    pub max_level: u32,
    pub horizon: u32,
    /// `correlations[i - 1][j - 1]` is the Pearson correlation of the
    /// level-`i` and level-`j` differences over the observations where
    /// both levels exist; `None` marks a cell with fewer than two
    /// observations or a constant column.
    pub correlations: Vec<Vec<Option<f64>>>,
    /// One entry per response level `1..=4`; `None` when the fit was
    /// impossible (too few observations or a degenerate design).
    pub regressions: Vec<(u32, Option<Regression>)>,
}

impl BackoffAnalysis {
    pub fn correlation(&self, i: u32, j: u32) -> Option<f64> {
        self.correlations[(i - 1) as usize][(j - 1) as usize]
    }
}

fn validate(max_level: u32, horizon: u32) -> Result<()> {
    if max_level < 2 {
        return Err(Error::InvalidParameter(format!(
            "correlation grid needs max_level >= 2, got {max_level}"
        )));
    }
    if horizon < 1 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    Ok(())
}

/// Runs the analysis on precomputed difference rows.
///
/// Each row holds one comparison's reciprocal-rank differences at
/// levels `1..=row.len()`; rows may be ragged because a topic only
/// defines levels up to its relevant count. This entry point exists
/// so the machinery can be exercised on synthetic difference data
/// with known structure.
pub fn backoff_from_deltas(
    rows: &[Vec<f64>],
    max_level: u32,
    horizon: u32,
) -> Result<BackoffAnalysis> {
    validate(max_level, horizon)?;
    if rows.is_empty() {
        return Err(Error::InsufficientData(
            "no comparisons to correlate".into(),
        ));
    }

    let cells: Vec<(usize, usize)> = (0..max_level as usize)
        .flat_map(|i| (i..max_level as usize).map(move |j| (i, j)))
        .collect();
    let computed: Vec<Option<f64>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let need = j + 1;
            let (xs, ys): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|row| row.len() >= need)
                .map(|row| (row[i], row[j]))
                .unzip();
            if i == j {
                // The diagonal is 1 by definition wherever the column
                // varies at all; route through the correlation check
                // only to detect degenerate columns.
                return pearson(&xs, &ys).ok().map(|_| 1.0);
            }
            pearson(&xs, &ys).ok()
        })
        .collect();
    let mut correlations =
        vec![vec![None; max_level as usize]; max_level as usize];
    for (&(i, j), &value) in cells.iter().zip(&computed) {
        correlations[i][j] = value;
        correlations[j][i] = value;
    }

    let regressions = (1..=REGRESSION_LEVELS)
        .map(|level| {
            let need = (level + horizon) as usize;
            let mut design = Vec::new();
            let mut response = Vec::new();
            for row in rows.iter().filter(|row| row.len() >= need) {
                let mut obs = Vec::with_capacity(1 + horizon as usize);
                obs.push(1.0);
                obs.extend_from_slice(&row[level as usize..need]);
                design.push(obs);
                response.push(row[(level - 1) as usize]);
            }
            let fit = ols(&design, &response).ok().map(|coefficients| Regression {
                level,
                n: response.len(),
                coefficients,
            });
            (level, fit)
        })
        .collect();

    Ok(BackoffAnalysis {
        max_level,
        horizon,
        correlations,
        regressions,
    })
}

/// Reciprocal-rank difference rows for every run pair and topic.
fn delta_rows(index: &PositionIndex, needed: u32) -> Vec<Vec<f64>> {
    fn rr(pv: &PositionVector, level: u32) -> f64 {
        pv.position_at_level(level).map_or(0.0, |p| 1.0 / f64::from(p))
    }
    let pairs = index.run_pairs();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            (0..index.n_topics())
                .map(|t| {
                    let x = index.vector(i, t);
                    let y = index.vector(j, t);
                    let levels = x.total_relevant().min(needed);
                    (1..=levels).map(|l| rr(x, l) - rr(y, l)).collect()
                })
                .collect::<Vec<Vec<f64>>>()
        })
        .flatten()
        .collect()
}

/// Correlation grid of per-level differences over all run pairs and
/// topics, plus regressions of each shallow level on the next
/// `horizon` deeper ones.
pub fn backoff_analysis(
    runs: &[RunRanking],
    judgments: &Judgments,
    max_level: u32,
    horizon: u32,
) -> Result<BackoffAnalysis> {
    validate(max_level, horizon)?;
    let index = PositionIndex::build(runs, judgments)?;
    if index.n_runs() < 2 {
        return Err(Error::InsufficientData(format!(
            "backoff analysis needs at least 2 runs, got {}",
            index.n_runs()
        )));
    }
    let needed = max_level.max(REGRESSION_LEVELS + horizon);
    backoff_from_deltas(&delta_rows(&index, needed), max_level, horizon)
}
