use std::fmt;

use super::Rational;
use crate::error::{Error, Result};

/// Open interval `(lo, hi)` with exact endpoints; neither endpoint belongs to it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OpenInterval {
    lo: Rational,
    hi: Rational,
}

impl OpenInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::EmptyInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(OpenInterval { lo, hi })
    }

    /// `(x - delta/2, x + delta/2)`.
    pub fn centered(x: &Rational, delta: &Rational) -> Result<Self> {
        if !delta.is_positive() {
            return Err(Error::NonPositiveDelta(delta.to_string()));
        }
        let half = delta / &Rational::from(2);
        OpenInterval::new(x - &half, x + &half)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.lo < t && t < &self.hi
    }

    pub fn is_subset_of(&self, other: &OpenInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn translate(&self, k: &Rational) -> OpenInterval {
        OpenInterval {
            lo: &self.lo + k,
            hi: &self.hi + k,
        }
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

impl fmt::Debug for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OpenInterval{self}")
    }
}
