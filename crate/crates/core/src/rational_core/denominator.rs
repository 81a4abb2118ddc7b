use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::rational::cmp_fractions;
use super::{OpenInterval, Rational};
use crate::error::Result;

/// A fraction `p/q` in lowest terms attaining the smallest denominator of an
/// interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DenominatorWitness {
    #[serde(serialize_with = "crate::cli::ser_display")]
    pub p: BigInt,
    #[serde(serialize_with = "crate::cli::ser_display")]
    pub q: BigInt,
}

impl DenominatorWitness {
    pub fn fraction(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone()).expect("witness denominator is positive")
    }
}

/// Smallest `q >= 1` such that some `p/q` lies strictly inside `interval`.
///
/// Continued-fraction descent: if the interval holds an integer the answer
/// has `q = 1`; otherwise shift by `floor(lo)`, invert, and continue. The
/// composed Möbius map carries the integer found at the bottom back to the
/// original interval. The fraction with least denominator in a positive
/// interval also has the least numerator, which is what makes inversion
/// valid. Runs in a number of steps bounded by the continued-fraction length
/// of the endpoints, without recursion.
pub fn smallest_denominator(interval: &OpenInterval) -> DenominatorWitness {
    // Current interval (a/b, c/d), with `None` standing for +infinity.
    let (mut a, mut b) = (interval.lo().numer().clone(), interval.lo().denom().clone());
    let mut hi: Option<(BigInt, BigInt)> =
        Some((interval.hi().numer().clone(), interval.hi().denom().clone()));

    // Original point t = (m00*y + m01) / (m10*y + m11) for current point y.
    let (mut m00, mut m01) = (BigInt::one(), BigInt::zero());
    let (mut m10, mut m11) = (BigInt::zero(), BigInt::one());

    loop {
        let k = a.div_floor(&b);
        let next = &k + 1u8;
        let integer_inside = match &hi {
            None => true,
            Some((c, d)) => cmp_fractions(&next, &BigInt::one(), c, d).is_lt(),
        };
        if integer_inside {
            let p = &m00 * &next + &m01;
            let q = &m10 * &next + &m11;
            return DenominatorWitness { p, q };
        }

        // y = k + 1/y'
        let new_m00 = &m00 * &k + &m01;
        let new_m10 = &m10 * &k + &m11;
        m01 = std::mem::replace(&mut m00, new_m00);
        m11 = std::mem::replace(&mut m10, new_m10);

        // Shifted interval (a', c') lies in [0, 1]; no integer inside means
        // 0 <= a/b - k < c/d - k <= 1.
        let (c, d) = hi.take().expect("finite upper endpoint when no integer is inside");
        let a_shift = &a - &k * &b;
        let c_shift = c - &k * &d;
        // Invert: (d / c', b / a'), with a' = 0 sending the top to infinity.
        hi = if a_shift.is_zero() {
            None
        } else {
            Some((b, a_shift))
        };
        a = d;
        b = c_shift;
    }
}

/// Smallest denominator of `(x - delta/2, x + delta/2)`.
pub fn q_min(x: &Rational, delta: &Rational) -> Result<DenominatorWitness> {
    let interval = OpenInterval::centered(x, delta)?;
    Ok(smallest_denominator(&interval))
}

/// Direct scan over `q = 1..=q_cap`, testing the first numerator above
/// `q * lo` against the strict upper bound. Testing oracle for
/// [`smallest_denominator`].
pub fn brute_force_q_min(interval: &OpenInterval, q_cap: u64) -> Option<DenominatorWitness> {
    let (ln, ld) = (interval.lo().numer(), interval.lo().denom());
    let (hn, hd) = (interval.hi().numer(), interval.hi().denom());
    for q in 1..=q_cap {
        let q = BigInt::from(q);
        // Least p with p/q > lo.
        let p = (&q * ln).div_floor(ld) + 1u8;
        if (&p * hd) < (hn * &q) {
            let g = p.gcd(&q);
            debug_assert!(g.is_one());
            return Some(DenominatorWitness { p, q });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn interval(lo: &str, hi: &str) -> OpenInterval {
        OpenInterval::new(r(lo), r(hi)).unwrap()
    }

    fn witness(p: i64, q: i64) -> DenominatorWitness {
        DenominatorWitness {
            p: p.into(),
            q: q.into(),
        }
    }

    #[test]
    fn descent_examples() {
        assert_eq!(smallest_denominator(&interval("11/25", "23/50")), witness(4, 9));
        assert_eq!(smallest_denominator(&interval("3/2", "5/2")), witness(2, 1));
        assert_eq!(smallest_denominator(&interval("1/3", "1/2")), witness(2, 5));
    }

    #[test]
    fn q_min_examples() {
        assert_eq!(q_min(&r("9/20"), &r("1/50")).unwrap().q, 9.into());
        assert_eq!(q_min(&r("1/2"), &r("1/10")).unwrap(), witness(1, 2));
        assert_eq!(q_min(&r("2/5"), &r("1/100")).unwrap(), witness(2, 5));
        assert!(q_min(&r("1/2"), &r("0")).is_err());
        assert!(q_min(&r("1/2"), &r("-1/3")).is_err());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_q_min(&interval("0.44", "0.46"), 100).unwrap().q, 9.into());
        assert_eq!(brute_force_q_min(&interval("1/3", "1/2"), 4), None);
        assert_eq!(brute_force_q_min(&interval("3/2", "5/2"), 1), Some(witness(2, 1)));
    }

    #[test]
    fn negative_and_unit_edge_intervals() {
        assert_eq!(smallest_denominator(&interval("-1/2", "-1/3")), witness(-2, 5));
        // Integer endpoint with nothing of denominator 1 inside.
        assert_eq!(smallest_denominator(&interval("0", "1/7")), witness(1, 8));
        assert_eq!(smallest_denominator(&interval("6/7", "1")), witness(7, 8));
        assert_eq!(smallest_denominator(&interval("0", "1")), witness(1, 2));
        assert_eq!(smallest_denominator(&interval("-1", "1")), witness(0, 1));
    }

    #[test]
    fn open_endpoints_never_count() {
        let w = smallest_denominator(&interval("1/3", "1/2"));
        assert_eq!(w.q, 5.into());
        // Narrow interval whose endpoints are themselves simple fractions.
        let w = smallest_denominator(&interval("1/2", "2/3"));
        assert_eq!(w, witness(3, 5));
    }

    #[test]
    fn long_continued_fractions() {
        // Consecutive Fibonacci ratios bracket the golden ratio with a
        // single Stern-Brocot path.
        let mut fib = vec![BigInt::one(), BigInt::one()];
        for i in 2..200 {
            let next = &fib[i - 1] + &fib[i - 2];
            fib.push(next);
        }
        let lo = Rational::new(fib[198].clone(), fib[197].clone()).unwrap();
        let hi = Rational::new(fib[197].clone(), fib[196].clone()).unwrap();
        let (lo, hi) = if lo < hi { (lo, hi) } else { (hi, lo) };
        let w = smallest_denominator(&OpenInterval::new(lo, hi).unwrap());
        // Mediant of the two endpoints.
        assert_eq!(w.q, &fib[197] + &fib[196]);
    }
}
