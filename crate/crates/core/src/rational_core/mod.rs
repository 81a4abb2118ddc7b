//! Exact rational arithmetic and the smallest-denominator search.
//!
//! Everything here is exact: interval endpoints are arbitrary-precision
//! fractions and membership is strict on both sides.

mod denominator;
mod interval;
mod rational;

pub use denominator::{brute_force_q_min, q_min, smallest_denominator, DenominatorWitness};
pub use interval::OpenInterval;
pub use rational::{bigint_ln, Rational};
