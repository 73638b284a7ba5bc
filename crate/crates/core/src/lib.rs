//! Best-case ranking evaluation: recall-level-1 metrics, lexicographic
//! precision preferences, the combinatorics of metric ties, and the
//! statistical machinery to compare retrieval runs.
//!
//! The library is organized around a small data model ([`model`]):
//! graded judgments binarized into relevant sets, per-topic run
//! rankings, and the position vector of a (run, topic) pair. On top
//! of it sit the reciprocal-rank metrics ([`metrics`]), the
//! lexicographic preference ([`lexiprec`]), closed-form tie
//! combinatorics with exhaustive oracles ([`theory`]), significance
//! tests ([`stats`]), and the experiment drivers ([`experiments`]).
//! File parsing and synthetic data live in [`ingest`]; report
//! rendering in [`report`].
//!
//! Metric values are generic over [`Scalar`]. Exact rationals are the
//! default throughout the pipeline so that preference signs are never
//! at the mercy of floating-point rounding; floats appear only inside
//! the statistical tests and at output boundaries.

pub mod error;
pub mod experiments;
pub mod ingest;
pub mod lexiprec;
pub mod metrics;
pub mod model;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod theory;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational over 64-bit integers: the working type for
/// per-topic metric values, whose denominators are bounded by the
/// retrieval depth.
pub type Rational = num_rational::Rational64;

/// Arbitrary-precision rational: the working type for aggregates and
/// combinatorial results, where denominators compound.
pub type BigRational = num_rational::BigRational;
