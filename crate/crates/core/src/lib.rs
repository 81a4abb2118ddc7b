//! Smallest denominators of rationals in shrinking intervals.
//!
//! * [`rational_core`] finds the least denominator in an open interval exactly.
//! * [`limit_law`] evaluates the limiting density of `log q_min + ½ log δ`,
//!   its tail, the moment generating function and generalized moments.
//! * [`moments`] builds the closed-form chain of logarithmic moments from
//!   zeta values and the Laurent coefficients of `B(z, ½)`.
//! * [`experiments`] samples the scaled statistic and compares it with the
//!   limit law.
//! * [`resonance`] computes minimal resonance orders of vectors in `[0,1]^d`.
//! * [`verify`] runs the full set of numerical acceptance checks.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod limit_law;
pub mod moments;
pub mod quadrature;
pub mod rational_core;
pub mod resonance;
pub mod special;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use rational_core::{
    brute_force_q_min, q_min, smallest_denominator, DenominatorWitness, OpenInterval, Rational,
};
