use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction, always stored in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer / denom`, reducing to lowest terms.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let numer = numer.into();
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Parse {
                input: format!("{numer}/0"),
                reason: "zero denominator".into(),
            });
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// The dyadic rational `bits / 2^128`, a point of `[0, 1)`.
    pub fn from_dyadic_u128(bits: u128) -> Self {
        Rational(BigRational::new(BigInt::from(bits), BigInt::one() << 128))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    /// Nearest `f64` (within one ulp), for any magnitude representable in f64.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(self.numer(), self.denom())
    }

    /// Natural logarithm of a positive rational, accurate even when the value
    /// underflows `f64`.
    pub fn ln(&self) -> f64 {
        assert!(self.is_positive(), "ln of a non-positive rational");
        bigint_ln(self.numer()) - bigint_ln(self.denom())
    }
}

/// `ln n` for a positive big integer.
pub fn bigint_ln(n: &BigInt) -> f64 {
    debug_assert!(n.is_positive());
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    // Scale so the integer quotient carries 64 significant bits.
    let shift = d.bits() as i64 - n.bits() as i64 + 64;
    let q = if shift >= 0 {
        (n << shift as u64) / d
    } else {
        n / (d << (-shift) as u64)
    };
    let mantissa = q.to_f64().unwrap_or(f64::NAN);
    if shift.abs() < 1000 {
        mantissa * 2f64.powi(-shift as i32)
    } else {
        // Two steps keep intermediate powers of two finite.
        let half = (-shift / 2) as i32;
        mantissa * 2f64.powi(half) * 2f64.powi(-shift as i32 - half)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rational({self})")
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

/// Parses `a/b`, integers, and decimal literals (`0.45`, `-1.5e-3`, `1e-8`)
/// exactly; decimals become fractions with a power-of-ten denominator.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim();
        let fail = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Err(fail("empty string"));
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| fail("bad numerator"))?;
            let d: BigInt = d.trim().parse().map_err(|_| fail("bad denominator"))?;
            if d.is_zero() {
                return Err(fail("zero denominator"));
            }
            return Ok(Rational(BigRational::new(n, d)));
        }
        parse_decimal(s).ok_or_else(|| fail("not an integer, fraction or decimal literal"))
    }
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return None;
    }
    let ten = BigInt::from(10u8);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(Rational(value))
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Cross-multiplication comparison of `a/b` with `c/d` for positive `b`, `d`.
pub(crate) fn cmp_fractions(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Ordering {
    debug_assert!(b.sign() == Sign::Plus && d.sign() == Sign::Plus);
    (a * d).cmp(&(c * b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_fractions_and_reduces() {
        let x = r("6/8");
        assert_eq!(x.numer(), &BigInt::from(3));
        assert_eq!(x.denom(), &BigInt::from(4));
        assert_eq!(r("-2/-4"), r("1/2"));
        assert_eq!(r("3/-6"), r("-1/2"));
    }

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(r("0.45"), r("9/20"));
        assert_eq!(r("0.02"), r("1/50"));
        assert_eq!(r("1e-8"), r("1/100000000"));
        assert_eq!(r("-1.5e-3"), r("-3/2000"));
        assert_eq!(r("2.5E2"), r("250"));
        assert_eq!(r(".5"), r("1/2"));
        assert_eq!(r("7"), Rational::from(7));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "e5", "--1", "1/x", "1e"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn floor_handles_negatives() {
        assert_eq!(r("7/2").floor(), BigInt::from(3));
        assert_eq!(r("-7/2").floor(), BigInt::from(-4));
        assert_eq!(r("-3").floor(), BigInt::from(-3));
    }

    #[test]
    fn float_conversion_and_log() {
        assert_eq!(r("1/3").to_f64(), 1.0 / 3.0);
        assert_eq!(r("-9/20").to_f64(), -0.45);
        assert!((r("1e-8").ln() - (1e-8f64).ln()).abs() < 1e-14);
        let tiny = Rational::new(1, BigInt::one() << 2000).unwrap();
        assert!((tiny.ln() + 2000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(tiny.to_f64(), 0.0);
    }

    #[test]
    fn dyadic_points_are_in_unit_interval() {
        let x = Rational::from_dyadic_u128(1u128 << 127);
        assert_eq!(x, r("1/2"));
        let top = Rational::from_dyadic_u128(u128::MAX);
        assert!(top < Rational::one());
    }
}
