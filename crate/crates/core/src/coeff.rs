//! Exact coefficients over the two supported rings of characteristic zero.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient ring of an algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    /// The integers.
    Z,
    /// The rationals.
    Q,
}

impl Ring {
    pub fn contains(self, c: &Coefficient) -> bool {
        match self {
            Ring::Z => c.is_integer(),
            Ring::Q => true,
        }
    }

    pub fn check(self, c: &Coefficient) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{c} is not an element of {self}")))
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Ring::Z => "Z",
            Ring::Q => "Q",
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Ring::Z),
            "Q" | "q" => Ok(Ring::Q),
            other => Err(Error::InvalidArgument(format!("unknown ring {other:?}, expected Z or Q"))),
        }
    }
}

/// An exact rational number kept in lowest terms with a positive denominator.
///
/// Integers are the rationals with denominator one, so one representation serves
/// both rings; membership in `Z` is checked through [`Ring::contains`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coefficient(BigRational);

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient(BigRational::zero())
    }

    pub fn one() -> Self {
        Coefficient(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Coefficient(BigRational::from_integer(n))
    }

    /// Builds `num/den`; panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Coefficient(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Coefficient(r)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Coefficient(self.0.abs())
    }

    /// Exact quotient; `None` when dividing by zero.
    pub fn checked_div(&self, rhs: &Coefficient) -> Option<Coefficient> {
        if rhs.is_zero() {
            None
        } else {
            Some(Coefficient(&self.0 / &rhs.0))
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Height: the larger of |numerator| and denominator.
    pub fn height(&self) -> BigInt {
        let n = self.0.numer().abs();
        let d = self.0.denom().clone();
        n.max(d)
    }
}

/// Reduces a pair of integers by their gcd and makes the first entry positive.
pub(crate) fn normalize_pair(a: BigInt, b: BigInt) -> (BigInt, BigInt) {
    let g = a.gcd(&b);
    let (mut a, mut b) = if g.is_zero() { (a, b) } else { (a / &g, b / &g) };
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        a = -a;
        b = -b;
    }
    (a, b)
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Coefficient {
    type Err = Error;

    /// Accepts `n` or `n/d` with `d > 0`, optional leading sign on `n`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("malformed coefficient {s:?}"));
        let parse_int = |t: &str| -> Result<BigInt> {
            let digits = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        match s.split_once('/') {
            None => Ok(Coefficient::from_bigint(parse_int(s)?)),
            Some((n, d)) => {
                if d.starts_with(['-', '+']) {
                    return Err(bad());
                }
                let n = parse_int(n)?;
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Coefficient(BigRational::new(n, d)))
            }
        }
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::from_int(n)
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        Coefficient(&self.0 + &rhs.0)
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        Coefficient(&self.0 - &rhs.0)
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        Coefficient(&self.0 * &rhs.0)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient(-&self.0)
    }
}

impl Add for Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: Coefficient) -> Coefficient {
        Coefficient(self.0 + rhs.0)
    }
}

impl Sub for Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: Coefficient) -> Coefficient {
        Coefficient(self.0 - rhs.0)
    }
}

impl Mul for Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: Coefficient) -> Coefficient {
        Coefficient(self.0 * rhs.0)
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient(-self.0)
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        self.0 += &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["0", "7", "-12", "1/2", "-3/4"] {
            assert_eq!(s.parse::<Coefficient>().unwrap().to_string(), s);
        }
        assert_eq!("4/6".parse::<Coefficient>().unwrap().to_string(), "2/3");
        assert_eq!("6/3".parse::<Coefficient>().unwrap().to_string(), "2");
        for bad in ["", "-", "1/0", "1/-2", "a", "1.5", "1/"] {
            assert!(bad.parse::<Coefficient>().is_err(), "{bad}");
        }
    }

    #[test]
    fn ring_membership() {
        assert!(Ring::Z.contains(&Coefficient::from_int(-3)));
        assert!(!Ring::Z.contains(&Coefficient::ratio(1, 2)));
        assert!(Ring::Q.contains(&Coefficient::ratio(1, 2)));
    }

    #[test]
    fn pair_normalization() {
        let (a, b) = normalize_pair(BigInt::from(-6), BigInt::from(4));
        assert_eq!((a, b), (BigInt::from(3), BigInt::from(-2)));
    }
}
