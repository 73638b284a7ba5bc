//! Recall-level-1 metrics and per-recall-level utilities.
//!
//! Reciprocal rank and Type-1 expected search length both depend only
//! on the position of the first retrieved relevant document and induce
//! the same order over rankings. The per-level utilities extend the
//! same idea to every recall level i: the utility at level i is the
//! reciprocal of the rank of the i-th relevant document, or zero when
//! that level was not retrieved.
//!
//! Values are computed in the caller's choice of [`Scalar`]; use
//! [`crate::Rational`] to keep differences like 1/8 - 1/4 exact so a
//! preference sign can never flip through rounding.

use crate::error::{Error, Result};
use crate::model::PositionVector;
use crate::scalar::Scalar;

/// Reciprocal rank of the first retrieved relevant document, zero
/// when the ranking retrieved none of them.
pub fn reciprocal_rank<V: Scalar>(pv: &PositionVector) -> V {
    match pv.positions().first() {
        Some(&p) => V::recip_rank(p),
        None => V::zero(),
    }
}

/// Type-1 expected search length: the rank of the first retrieved
/// relevant document, or `None` when no relevant document was
/// retrieved.
pub fn esl1(pv: &PositionVector) -> Option<u32> {
    pv.positions().first().copied()
}

/// Reciprocal-rank utility at recall level `i` (1-based): the
/// reciprocal of the i-th relevant document's rank, zero when level
/// `i` was not retrieved.
///
/// Errors when `i` is outside `[1, R]`.
pub fn rr_at_level<V: Scalar>(pv: &PositionVector, i: u32) -> Result<V> {
    check_level(pv, i)?;
    Ok(match pv.position_at_level(i) {
        Some(p) => V::recip_rank(p),
        None => V::zero(),
    })
}

/// Type-2 expected search length at recall level `i`: the rank of the
/// i-th relevant document, `None` when that level was not retrieved.
///
/// Errors when `i` is outside `[1, R]`.
pub fn esl_at_level(pv: &PositionVector, i: u32) -> Result<Option<u32>> {
    check_level(pv, i)?;
    Ok(pv.position_at_level(i))
}

/// Difference in reciprocal-rank utility at level `i`:
/// `rr_at_level(x, i) - rr_at_level(y, i)`.
///
/// Errors when the vectors disagree on the total relevant count or
/// `i` is out of range.
pub fn delta_rr<V: Scalar>(x: &PositionVector, y: &PositionVector, i: u32) -> Result<V> {
    if x.total_relevant() != y.total_relevant() {
        return Err(Error::MismatchedRelevantCount {
            left: x.total_relevant(),
            right: y.total_relevant(),
        });
    }
    Ok(rr_at_level::<V>(x, i)? - rr_at_level::<V>(y, i)?)
}

fn check_level(pv: &PositionVector, i: u32) -> Result<()> {
    if i == 0 || i > pv.total_relevant() {
        return Err(Error::InvalidParameter(format!(
            "recall level {i} outside [1, {}]",
            pv.total_relevant()
        )));
    }
    Ok(())
}

/// The full utility profile of one ranking: reciprocal-rank values
/// for recall levels `1..=R`, non-increasing by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct RecallLevelUtilities<V> {
    rr: Vec<V>,
}

impl<V: Scalar> RecallLevelUtilities<V> {
    /// Computes the profile for every level of the vector.
    pub fn from_positions(pv: &PositionVector) -> Self {
        let rr = (1..=pv.total_relevant())
            .map(|i| match pv.position_at_level(i) {
                Some(p) => V::recip_rank(p),
                None => V::zero(),
            })
            .collect();
        Self { rr }
    }

    /// Number of recall levels R.
    pub fn levels(&self) -> u32 {
        self.rr.len() as u32
    }

    /// Utility at level `i` (1-based), `None` outside `[1, R]`.
    pub fn at(&self, i: u32) -> Option<&V> {
        if i == 0 {
            return None;
        }
        self.rr.get(i as usize - 1)
    }

    /// Utilities for levels `1..=R` in order.
    pub fn as_slice(&self) -> &[V] {
        &self.rr
    }
}
