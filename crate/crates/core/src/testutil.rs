//! Shared proptest strategies for unit tests.

use proptest::prelude::*;

use crate::model::PositionVector;

/// Arbitrary position vector with depth at most `max_depth` and total
/// relevant count at most `max_relevant`. The retrieved count can be
/// anywhere from zero to min(R, depth), so unretrieved relevant
/// documents occur regularly.
pub fn arb_position_vector(
    max_depth: u32,
    max_relevant: u32,
) -> impl Strategy<Value = PositionVector> {
    (1..=max_depth, 0..=max_relevant).prop_flat_map(|(depth, r)| {
        let max_retrieved = r.min(depth) as usize;
        (0..=max_retrieved).prop_flat_map(move |m| {
            proptest::sample::subsequence((1..=depth).collect::<Vec<u32>>(), m)
                .prop_map(move |positions| PositionVector::new(positions, r).unwrap())
        })
    })
}

/// Pair of position vectors sharing one total relevant count, as
/// produced by evaluating two runs against the same judged topic.
pub fn arb_position_vector_pair(
    max_depth: u32,
    max_relevant: u32,
) -> impl Strategy<Value = (PositionVector, PositionVector)> {
    (1..=max_depth, 0..=max_relevant).prop_flat_map(|(depth, r)| {
        let side = move || {
            let max_retrieved = r.min(depth) as usize;
            (0..=max_retrieved).prop_flat_map(move |m| {
                proptest::sample::subsequence((1..=depth).collect::<Vec<u32>>(), m)
                    .prop_map(move |positions| PositionVector::new(positions, r).unwrap())
            })
        };
        (side(), side())
    })
}
