//! Scalar abstraction for metric values.
//!
//! Everything rank-valued in this crate is a reciprocal of a small
//! integer, so computations stay exact when the scalar is a rational
//! type and merely fast when it is a float. Code that produces metric
//! values is generic over [`Scalar`]; the crate root exports the
//! concrete aliases [`crate::Rational`] and [`crate::BigRational`] for
//! exact work, with `f64` available wherever exactness is not needed.

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Numeric scalar used for metric values.
///
/// Implemented (via the blanket impl) by `f32` and `f64` for
/// approximate work and by [`crate::Rational`] and
/// [`crate::BigRational`] where results must be exact.
pub trait Scalar: Num + Signed + Clone + PartialOrd + ToPrimitive + FromPrimitive {
    /// Embeds an integer exactly.
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer representable in every supported scalar")
    }

    /// Reciprocal of a 1-based rank position.
    fn recip_rank(position: u32) -> Self {
        debug_assert!(position >= 1, "rank positions are 1-based");
        Self::one() / Self::from_int(i64::from(position))
    }

    /// Approximate view of the value for reporting.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Num + Signed + Clone + PartialOrd + ToPrimitive + FromPrimitive {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{BigRational, Rational};
    use num_bigint::BigInt;

    #[test]
    fn recip_rank_is_exact_for_rationals() {
        let third: Rational = Scalar::recip_rank(3);
        assert_eq!(third, Rational::new(1, 3));
        let big: BigRational = Scalar::recip_rank(7);
        assert_eq!(big, BigRational::new(BigInt::from(1), BigInt::from(7)));
    }

    #[test]
    fn recip_rank_matches_float_division() {
        let v: f64 = Scalar::recip_rank(8);
        assert_eq!(v, 0.125);
        let v32: f32 = Scalar::recip_rank(4);
        assert_eq!(v32, 0.25);
    }

    #[test]
    fn from_int_and_approx_round_trip() {
        let v: Rational = Scalar::from_int(-41);
        assert_eq!(v.approx(), -41.0);
        let w: f64 = Scalar::from_int(12);
        assert_eq!(w, 12.0);
    }

    #[test]
    fn rational_sums_stay_exact() {
        // 1/3 + 1/6 = 1/2 exactly; the float route merely approximates.
        let lhs: Rational = Scalar::recip_rank(3);
        let rhs: Rational = Scalar::recip_rank(6);
        assert_eq!(lhs + rhs, Rational::new(1, 2));
    }
}
