//! Closed-form tie combinatorics and exhaustive brute-force oracles.
//!
//! Everything here is exact: big-integer binomials, rational
//! probabilities and ratios, and explicit enumerations. These results
//! serve as ground truth for the rest of the crate, so no floating
//! point enters any computation.
//!
//! Three independent routes to the same preference live here and in
//! [`crate::lexiprec`]:
//!
//! * [`crate::lexiprec::sgn_lexiprecision`] compares integer
//!   positions level by level;
//! * [`recall_level_preference`] compares the rational utility
//!   profiles lexicographically;
//! * [`psych_relevance_preference`] enumerates every non-empty subset
//!   of the relevant items (a hypothetical user's true relevant set)
//!   and compares best-case utility multisets.
//!
//! The test suite checks that all three agree exhaustively at small
//! scale; the routes are kept separate on purpose.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::metrics::RecallLevelUtilities;
use crate::model::PositionVector;
use crate::{BigRational, Rational};

/// Default bound on how many arrangements an exhaustive enumeration
/// may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Largest relevant count accepted by the subset-enumeration oracle
/// (it walks all `2^R - 1` subsets).
pub const MAX_PSYCH_RELEVANT: u32 = 20;

/// Exact binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn choose(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// Probability that a second ranking ties a first one whose best
/// relevant document sits at rank `r1`, when the relevant items of
/// the second ranking are arranged uniformly at random:
/// `C(D - r1, R - 1) / C(D, R)`.
///
/// Requires `R >= 1`, `R <= D`, and `1 <= r1 <= D - R + 1` (beyond
/// that rank there is no room for the remaining `R - 1` items).
pub fn tie_probability(d: u64, r: u64, r1: u64) -> Result<BigRational> {
    if r < 1 {
        return Err(Error::InvalidParameter(
            "at least one relevant document is required".into(),
        ));
    }
    if r > d {
        return Err(Error::InvalidParameter(format!(
            "{r} relevant documents cannot fit in a corpus of {d}"
        )));
    }
    if r1 < 1 || r1 > d - r + 1 {
        return Err(Error::InvalidParameter(format!(
            "first position {r1} outside [1, {}]",
            d - r + 1
        )));
    }
    Ok(BigRational::new(
        BigInt::from(choose(d - r1, r - 1)),
        BigInt::from(choose(d, r)),
    ))
}

/// How many times more values a magnitude can take when `k` recall
/// levels are added to `R`: the product form
/// `prod_{i=R+1}^{R+k} (D + 1 - i) / i`, which equals
/// `C(D, R+k) / C(D, R)` exactly.
///
/// Requires `R + k <= D`.
pub fn value_count_ratio(d: u64, r: u64, k: u64) -> Result<BigRational> {
    if r + k > d {
        return Err(Error::InvalidParameter(format!(
            "{r} + {k} recall levels exceed corpus size {d}"
        )));
    }
    let mut ratio = BigRational::one();
    for i in (r + 1)..=(r + k) {
        ratio *= BigRational::new(BigInt::from(d + 1 - i), BigInt::from(i));
    }
    Ok(ratio)
}

/// All `C(D, R)` arrangements of `R` relevant documents in a corpus
/// of `D`, in lexicographic order, each as a fully retrieved position
/// vector. Uses [`DEFAULT_ENUMERATION_CAP`].
pub fn enumerate_arrangements(d: u32, r: u32) -> Result<Vec<PositionVector>> {
    enumerate_arrangements_capped(d, r, DEFAULT_ENUMERATION_CAP)
}

/// [`enumerate_arrangements`] with an explicit cap; errors instead of
/// truncating when `C(D, R)` exceeds it.
pub fn enumerate_arrangements_capped(d: u32, r: u32, cap: u64) -> Result<Vec<PositionVector>> {
    if r > d {
        return Err(Error::InvalidParameter(format!(
            "{r} relevant documents cannot fit in a corpus of {d}"
        )));
    }
    let count = choose(u64::from(d), u64::from(r));
    if count > BigUint::from(cap) {
        return Err(Error::EnumerationCapExceeded {
            count: count.to_u128().unwrap_or(u128::MAX),
            cap,
        });
    }
    let total = count.to_usize().expect("cap bounds the count");
    let mut out = Vec::with_capacity(total);
    if r == 0 {
        out.push(PositionVector::new(Vec::new(), 0)?);
        return Ok(out);
    }
    let mut current: Vec<u32> = (1..=r).collect();
    loop {
        out.push(PositionVector::new(current.clone(), r)?);
        // Advance to the next combination in lexicographic order:
        // bump the rightmost position that still has headroom.
        let mut idx = r as usize;
        loop {
            if idx == 0 {
                return Ok(out);
            }
            idx -= 1;
            if current[idx] < d - (r - 1 - idx as u32) {
                break;
            }
        }
        current[idx] += 1;
        for j in (idx + 1)..r as usize {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Best-case utilities of every non-empty subset of the relevant
/// items under one ranking, sorted descending.
///
/// A user who considers exactly the subset `S` relevant gets utility
/// `1 / min rank among S's retrieved members`, or zero when none were
/// retrieved. The profile has `2^R - 1` entries; for a ranking that
/// retrieved its first relevant item, the top utility appears exactly
/// `2^(R-1)` times (every subset containing the best-placed item).
pub fn psych_utility_profile(pv: &PositionVector) -> Result<Vec<Rational>> {
    let r = pv.total_relevant();
    if r > MAX_PSYCH_RELEVANT {
        return Err(Error::InvalidParameter(format!(
            "subset enumeration supports at most {MAX_PSYCH_RELEVANT} relevant documents, got {r}"
        )));
    }
    let positions = pv.positions();
    let mut utilities = Vec::with_capacity((1usize << r) - 1);
    for mask in 1u32..(1u32 << r) {
        // The lowest set bit is the subset member with the best rank,
        // because positions are sorted ascending by level.
        let best_level = mask.trailing_zeros() as usize;
        let utility = match positions.get(best_level) {
            Some(&p) => Rational::new(1, i64::from(p)),
            None => Rational::new(0, 1),
        };
        utilities.push(utility);
    }
    utilities.sort_unstable_by(|a, b| b.cmp(a));
    Ok(utilities)
}

/// Preference between two rankings over the population of
/// psychological-relevance users: compares the sorted best-case
/// utility profiles of all `2^R - 1` non-empty item subsets
/// lexicographically.
pub fn psych_relevance_preference(x: &PositionVector, y: &PositionVector) -> Result<i8> {
    check_same_relevant(x, y)?;
    let ux = psych_utility_profile(x)?;
    let uy = psych_utility_profile(y)?;
    Ok(first_difference_sign(&ux, &uy))
}

/// Preference between two rankings over the population of
/// recall-requirement users: compares the utility profiles
/// `(RR_1, ..., RR_R)` lexicographically. The profiles are already
/// sorted because utility degrades monotonically in recall level.
pub fn recall_level_preference(x: &PositionVector, y: &PositionVector) -> Result<i8> {
    check_same_relevant(x, y)?;
    let ux: RecallLevelUtilities<Rational> = RecallLevelUtilities::from_positions(x);
    let uy: RecallLevelUtilities<Rational> = RecallLevelUtilities::from_positions(y);
    Ok(first_difference_sign(ux.as_slice(), uy.as_slice()))
}

fn check_same_relevant(x: &PositionVector, y: &PositionVector) -> Result<()> {
    if x.total_relevant() != y.total_relevant() {
        return Err(Error::MismatchedRelevantCount {
            left: x.total_relevant(),
            right: y.total_relevant(),
        });
    }
    Ok(())
}

fn first_difference_sign(xs: &[Rational], ys: &[Rational]) -> i8 {
    debug_assert_eq!(xs.len(), ys.len());
    for (a, b) in xs.iter().zip(ys) {
        if a > b {
            return 1;
        }
        if a < b {
            return -1;
        }
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexiprec::sgn_lexiprecision;

    fn pv(positions: &[u32], r: u32) -> PositionVector {
        PositionVector::new(positions.to_vec(), r).unwrap()
    }

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn tie_probability_matches_direct_enumeration_at_small_scale() {
        // Independent route: count arrangements by first position.
        let all = enumerate_arrangements(5, 2).unwrap();
        assert_eq!(all.len(), 10);
        let with_first = |r1: u32| all.iter().filter(|a| a.positions()[0] == r1).count();
        assert_eq!(with_first(1), 4);
        assert_eq!(with_first(4), 1);
        assert_eq!(tie_probability(5, 2, 1).unwrap(), big(4, 10));
        assert_eq!(tie_probability(5, 2, 4).unwrap(), big(1, 10));
    }

    #[test]
    fn tie_probability_single_relevant_is_uniform() {
        for d in 1..=8u64 {
            for r1 in 1..=d {
                assert_eq!(tie_probability(d, 1, r1).unwrap(), big(1, d as i64));
            }
        }
    }

    #[test]
    fn tie_probability_rejects_out_of_range_inputs() {
        assert!(tie_probability(5, 0, 1).is_err());
        assert!(tie_probability(5, 6, 1).is_err());
        assert!(tie_probability(5, 2, 0).is_err());
        assert!(tie_probability(5, 2, 5).is_err());
        assert!(tie_probability(5, 2, 4).is_ok());
    }

    #[test]
    fn value_count_ratio_examples() {
        assert_eq!(value_count_ratio(10, 2, 0).unwrap(), big(1, 1));
        assert_eq!(value_count_ratio(10, 2, 1).unwrap(), big(8, 3));
        assert_eq!(value_count_ratio(10, 2, 2).unwrap(), big(14, 3));
        assert!(value_count_ratio(10, 2, 9).is_err());
    }

    #[test]
    fn value_count_ratio_product_equals_binomial_ratio() {
        // The product form must reproduce C(D, R+k) / C(D, R) exactly.
        for d in 1..=15u64 {
            for r in 0..=d {
                for k in 0..=(d - r) {
                    let ratio = value_count_ratio(d, r, k).unwrap();
                    let expected = BigRational::new(
                        BigInt::from(choose(d, r + k)),
                        BigInt::from(choose(d, r)),
                    );
                    assert_eq!(ratio, expected, "D={d} R={r} k={k}");
                }
            }
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let arr = enumerate_arrangements(3, 2).unwrap();
        let positions: Vec<&[u32]> = arr.iter().map(|a| a.positions()).collect();
        assert_eq!(positions, vec![&[1, 2][..], &[1, 3], &[2, 3]]);

        let singles = enumerate_arrangements(4, 1).unwrap();
        let positions: Vec<&[u32]> = singles.iter().map(|a| a.positions()).collect();
        assert_eq!(positions, vec![&[1][..], &[2], &[3], &[4]]);

        assert_eq!(enumerate_arrangements(10, 3).unwrap().len(), 120);
        assert_eq!(enumerate_arrangements(6, 0).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let err = enumerate_arrangements_capped(10, 3, 100).unwrap_err();
        match err {
            Error::EnumerationCapExceeded { count, cap } => {
                assert_eq!(count, 120);
                assert_eq!(cap, 100);
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(enumerate_arrangements_capped(10, 3, 120).is_ok());
    }

    #[test]
    fn psych_profile_counts_and_orders_utilities() {
        let profile = psych_utility_profile(&pv(&[1, 3], 2)).unwrap();
        assert_eq!(
            profile,
            vec![
                Rational::new(1, 1),
                Rational::new(1, 1),
                Rational::new(1, 3)
            ]
        );
        // Top utility appears 2^(R-1) times.
        let top = profile[0];
        assert_eq!(profile.iter().filter(|&&u| u == top).count(), 2);
    }

    #[test]
    fn psych_profile_top_multiplicity_scales_with_relevant_count() {
        for r in 1..=6u32 {
            let positions: Vec<u32> = (1..=r).map(|i| i * 2).collect();
            let profile = psych_utility_profile(&pv(&positions, r)).unwrap();
            assert_eq!(profile.len(), (1usize << r) - 1);
            let top = profile[0];
            assert_eq!(
                profile.iter().filter(|&&u| u == top).count(),
                1usize << (r - 1)
            );
        }
    }

    #[test]
    fn psych_preference_examples() {
        assert_eq!(
            psych_relevance_preference(&pv(&[1, 3], 2), &pv(&[1, 4], 2)).unwrap(),
            1
        );
        let x = pv(&[2, 5], 2);
        assert_eq!(psych_relevance_preference(&x, &x).unwrap(), 0);
        assert!(psych_relevance_preference(&pv(&[1], 1), &pv(&[1, 2], 2)).is_err());
    }

    #[test]
    fn psych_preference_rejects_oversized_relevant_sets() {
        let positions: Vec<u32> = (1..=21).collect();
        let big_pv = pv(&positions, 21);
        assert!(psych_utility_profile(&big_pv).is_err());
    }

    #[test]
    fn recall_level_preference_examples() {
        assert_eq!(
            recall_level_preference(&pv(&[2], 1), &pv(&[3], 1)).unwrap(),
            1
        );
        assert_eq!(
            recall_level_preference(&pv(&[], 2), &pv(&[], 2)).unwrap(),
            0
        );
        assert_eq!(
            recall_level_preference(&pv(&[2, 8], 2), &pv(&[2, 4], 2)).unwrap(),
            -1
        );
    }

    #[test]
    fn three_preference_routes_agree_on_a_small_sweep() {
        let arrangements = enumerate_arrangements(7, 3).unwrap();
        for x in &arrangements {
            for y in &arrangements {
                let lexi = sgn_lexiprecision(x, y).unwrap();
                assert_eq!(psych_relevance_preference(x, y).unwrap(), lexi);
                assert_eq!(recall_level_preference(x, y).unwrap(), lexi);
            }
        }
    }

    #[test]
    fn distinct_value_pigeonhole() {
        use std::collections::HashSet;
        let d = 8u32;
        let r = 3u32;
        let arrangements = enumerate_arrangements(d, r).unwrap();
        let classes: HashSet<&PositionVector> = arrangements.iter().collect();
        let rr1_values: HashSet<Rational> = arrangements
            .iter()
            .map(|a| crate::metrics::reciprocal_rank(a))
            .collect();
        assert_eq!(classes.len() as u64, 56);
        assert_eq!(rr1_values.len() as u32, d - r + 1);
    }
}
