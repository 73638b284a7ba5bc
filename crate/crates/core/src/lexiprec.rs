//! Lexicographic-precision preferences between rankings.
//!
//! Two rankings are compared level by level: the decisive level i* is
//! the first recall level whose reciprocal-rank utilities differ, the
//! sign preference is the sign of that difference, and the magnitude
//! preference is the difference itself. Whenever plain reciprocal
//! rank already separates the pair (a nonzero difference at level 1),
//! the lexicographic preference reproduces it exactly; the deeper
//! levels only break ties.
//!
//! Because utilities are reciprocals of integer ranks, the decisive
//! level can be found by comparing integer positions directly; no
//! rational arithmetic happens until a magnitude is requested.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::metrics::delta_rr;
use crate::model::{PositionVector, Preference};
use crate::scalar::Scalar;
use crate::{BigRational, Rational};

/// Which magnitude an aggregate reports for each compared pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MagnitudeScheme {
    /// The reciprocal-rank difference at the decisive level.
    RrLp,
    /// Only its sign.
    SgnLp,
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

/// The smallest recall level at which the two rankings' utilities
/// differ, or `None` when every level ties.
///
/// A tie at every level can only happen when both rankings place all
/// relevant documents in exactly the same positions. Once both
/// vectors are exhausted, every remaining level pits one unretrieved
/// document against another (utility zero on both sides), so the scan
/// stops at the shorter vector's end.
pub fn decisive_level(x: &PositionVector, y: &PositionVector) -> Result<Option<u32>> {
    check_same_relevant(x, y)?;
    let px = x.positions();
    let py = y.positions();
    let common = px.len().min(py.len());
    for i in 0..common {
        if px[i] != py[i] {
            return Ok(Some(i as u32 + 1));
        }
    }
    if px.len() != py.len() {
        // The next level has a retrieved document on exactly one side.
        return Ok(Some(common as u32 + 1));
    }
    Ok(None)
}

/// Sign of the utility difference at the decisive level: +1 when `x`
/// is preferred, -1 when `y` is, 0 for the all-levels tie.
pub fn sgn_lexiprecision(x: &PositionVector, y: &PositionVector) -> Result<i8> {
    Ok(match decisive_level(x, y)? {
        None => 0,
        Some(level) => match (x.position_at_level(level), y.position_at_level(level)) {
            (Some(a), Some(b)) => {
                if a < b {
                    1
                } else {
                    -1
                }
            }
            (Some(_), None) => 1,
            (None, Some(_)) => -1,
            (None, None) => unreachable!("decisive level has a difference"),
        },
    })
}

/// The utility difference at the decisive level, zero for the
/// all-levels tie. Equals the plain reciprocal-rank difference
/// whenever that difference is nonzero.
pub fn rr_lexiprecision<V: Scalar>(x: &PositionVector, y: &PositionVector) -> Result<V> {
    Ok(match decisive_level(x, y)? {
        None => V::zero(),
        Some(level) => delta_rr(x, y, level)?,
    })
}

/// Full comparison outcome: decisive level, sign, and magnitude.
pub fn lexi_compare<V: Scalar>(x: &PositionVector, y: &PositionVector) -> Result<Preference<V>> {
    Ok(match decisive_level(x, y)? {
        None => Preference::tie(),
        Some(level) => Preference::decided(level, delta_rr(x, y, level)?),
    })
}

/// Arithmetic mean of per-topic preference magnitudes under the
/// chosen scheme, computed exactly.
///
/// The per-topic values are small rationals, but their sum needs
/// arbitrary precision: denominators as large as the retrieval depth
/// have a least common multiple that overflows any fixed-width
/// integer long before a benchmark's topic count is reached.
pub fn aggregate_preference(
    preferences: &[Preference<Rational>],
    scheme: MagnitudeScheme,
) -> Result<BigRational> {
    if preferences.is_empty() {
        return Err(Error::InsufficientData(
            "no per-topic preferences to aggregate".into(),
        ));
    }
    let mut sum = BigRational::from_integer(BigInt::from(0));
    for pref in preferences {
        let term = match scheme {
            MagnitudeScheme::RrLp => {
                let m = pref.magnitude();
                BigRational::new(BigInt::from(*m.numer()), BigInt::from(*m.denom()))
            }
            MagnitudeScheme::SgnLp => BigRational::from_integer(BigInt::from(pref.sign())),
        };
        sum += term;
    }
    Ok(sum / BigRational::from_integer(BigInt::from(preferences.len() as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pv(positions: &[u32], r: u32) -> PositionVector {
        PositionVector::new(positions.to_vec(), r).unwrap()
    }

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn decisive_level_examples() {
        assert_eq!(decisive_level(&pv(&[1, 3], 2), &pv(&[1, 4], 2)).unwrap(), Some(2));
        assert_eq!(decisive_level(&pv(&[2, 5], 2), &pv(&[2, 5], 2)).unwrap(), None);
        assert_eq!(decisive_level(&pv(&[1, 2], 2), &pv(&[3, 4], 2)).unwrap(), Some(1));
    }

    #[test]
    fn decisive_level_when_one_side_exhausts_first() {
        assert_eq!(decisive_level(&pv(&[2], 3), &pv(&[2, 7], 3)).unwrap(), Some(2));
        assert_eq!(decisive_level(&pv(&[], 2), &pv(&[5], 2)).unwrap(), Some(1));
        assert_eq!(decisive_level(&pv(&[], 2), &pv(&[], 2)).unwrap(), None);
    }

    #[test]
    fn sgn_breaks_first_position_ties() {
        // Equal first positions and equal first search lengths, yet
        // the deeper level decides: (2,8) loses to (2,4).
        let x = pv(&[2, 8], 2);
        let y = pv(&[2, 4], 2);
        assert_eq!(delta_rr::<Rational>(&x, &y, 1).unwrap(), Rational::new(0, 1));
        assert_eq!(crate::metrics::esl1(&x), crate::metrics::esl1(&y));
        assert_eq!(sgn_lexiprecision(&x, &y).unwrap(), -1);
        assert_eq!(
            rr_lexiprecision::<Rational>(&x, &y).unwrap(),
            Rational::new(-1, 8)
        );
    }

    #[test]
    fn sgn_examples() {
        let x = pv(&[4, 9], 2);
        assert_eq!(sgn_lexiprecision(&x, &x).unwrap(), 0);
        assert_eq!(sgn_lexiprecision(&pv(&[1], 1), &pv(&[2], 1)).unwrap(), 1);
    }

    #[test]
    fn rr_lexiprecision_reduces_to_delta_rr1_when_decided_at_level_one() {
        assert_eq!(
            rr_lexiprecision::<Rational>(&pv(&[1], 1), &pv(&[2], 1)).unwrap(),
            Rational::new(1, 2)
        );
        let x = pv(&[3], 1);
        assert_eq!(
            rr_lexiprecision::<Rational>(&x, &x).unwrap(),
            Rational::new(0, 1)
        );
    }

    #[test]
    fn lexi_compare_examples() {
        let p: Preference<Rational> = lexi_compare(&pv(&[1, 3], 2), &pv(&[1, 4], 2)).unwrap();
        assert_eq!(p.istar(), Some(2));
        assert_eq!(p.sign(), 1);
        assert_eq!(*p.magnitude(), Rational::new(1, 12));

        let p: Preference<Rational> = lexi_compare(&pv(&[], 1), &pv(&[5], 1)).unwrap();
        assert_eq!(p.istar(), Some(1));
        assert_eq!(p.sign(), -1);
        assert_eq!(*p.magnitude(), Rational::new(-1, 5));

        let p: Preference<Rational> = lexi_compare(&pv(&[], 3), &pv(&[], 3)).unwrap();
        assert!(p.is_tie());
        assert_eq!(p.sign(), 0);
        assert_eq!(*p.magnitude(), Rational::new(0, 1));
    }

    #[test]
    fn mismatched_relevant_counts_rejected_everywhere() {
        let x = pv(&[1], 1);
        let y = pv(&[1], 2);
        assert!(decisive_level(&x, &y).is_err());
        assert!(sgn_lexiprecision(&x, &y).is_err());
        assert!(rr_lexiprecision::<Rational>(&x, &y).is_err());
        assert!(lexi_compare::<Rational>(&x, &y).is_err());
    }

    #[test]
    fn aggregate_preference_examples() {
        let prefs = vec![
            Preference::decided(1, Rational::new(1, 2)),
            Preference::decided(1, Rational::new(1, 3)),
            Preference::decided(2, Rational::new(-1, 6)),
        ];
        assert_eq!(
            aggregate_preference(&prefs, MagnitudeScheme::SgnLp).unwrap(),
            big(1, 3)
        );

        let zeros: Vec<Preference<Rational>> = vec![Preference::tie(), Preference::tie()];
        assert_eq!(
            aggregate_preference(&zeros, MagnitudeScheme::RrLp).unwrap(),
            big(0, 1)
        );

        let two = vec![
            Preference::decided(1, Rational::new(1, 2)),
            Preference::decided(2, Rational::new(-1, 8)),
        ];
        assert_eq!(
            aggregate_preference(&two, MagnitudeScheme::RrLp).unwrap(),
            big(3, 16)
        );

        assert!(aggregate_preference(&[], MagnitudeScheme::RrLp).is_err());
    }

    #[test]
    fn small_exhaustive_order_is_total_and_transitive() {
        // All C(5,2) = 10 fully retrieved arrangements.
        let mut arrangements = Vec::new();
        for a in 1..=5u32 {
            for b in (a + 1)..=5 {
                arrangements.push(pv(&[a, b], 2));
            }
        }
        assert_eq!(arrangements.len(), 10);
        let n = arrangements.len();
        let mut sign = vec![vec![0i8; n]; n];
        for i in 0..n {
            for j in 0..n {
                sign[i][j] = sgn_lexiprecision(&arrangements[i], &arrangements[j]).unwrap();
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(sign[i][j], -sign[j][i]);
                assert_eq!(sign[i][j] == 0, i == j);
                for k in 0..n {
                    if sign[i][j] > 0 && sign[j][k] > 0 {
                        assert_eq!(sign[i][k], 1);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn order_preservation_and_antisymmetry(
            (x, y) in crate::testutil::arb_position_vector_pair(30, 8)
        ) {
            let d1: Rational = delta_rr(&x, &y, 1).map_or(Rational::new(0, 1), |v| v);
            let sign = sgn_lexiprecision(&x, &y).unwrap();
            if x.total_relevant() >= 1 {
                let d1: Rational = delta_rr(&x, &y, 1).unwrap();
                if d1 > Rational::new(0, 1) {
                    prop_assert_eq!(sign, 1);
                } else if d1 < Rational::new(0, 1) {
                    prop_assert_eq!(sign, -1);
                }
            } else {
                prop_assert_eq!(sign, 0);
            }
            let _ = d1;

            prop_assert_eq!(sign, -sgn_lexiprecision(&y, &x).unwrap());
            let m: Rational = rr_lexiprecision(&x, &y).unwrap();
            let back: Rational = rr_lexiprecision(&y, &x).unwrap();
            prop_assert_eq!(m, -back);
        }

        #[test]
        fn totality_and_sign_agreement(
            (x, y) in crate::testutil::arb_position_vector_pair(30, 8)
        ) {
            let sign = sgn_lexiprecision(&x, &y).unwrap();
            prop_assert_eq!(sign == 0, x.positions() == y.positions());

            let m: Rational = rr_lexiprecision(&x, &y).unwrap();
            let msign = if m > Rational::new(0, 1) {
                1i8
            } else if m < Rational::new(0, 1) {
                -1
            } else {
                0
            };
            prop_assert_eq!(sign, msign);

            let pref: Preference<Rational> = lexi_compare(&x, &y).unwrap();
            prop_assert_eq!(pref.sign(), sign);
            prop_assert_eq!(*pref.magnitude(), m);
            if let Some(level) = pref.istar() {
                prop_assert!(level >= 1 && level <= x.total_relevant());
                prop_assert_eq!(Some(level), decisive_level(&x, &y).unwrap());
            }
        }

        #[test]
        fn rr_lexiprecision_matches_delta_rr1_when_nonzero(
            (x, y) in crate::testutil::arb_position_vector_pair(30, 8)
        ) {
            if x.total_relevant() >= 1 {
                let d1: Rational = delta_rr(&x, &y, 1).unwrap();
                if d1 != Rational::new(0, 1) {
                    let m: Rational = rr_lexiprecision(&x, &y).unwrap();
                    prop_assert_eq!(m, d1);
                }
            }
        }
    }
}
