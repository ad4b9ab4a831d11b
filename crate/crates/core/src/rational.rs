//! Exact rationals extended by a tropical zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let parse_int = |t: &str| -> Result<BigInt> {
        let t = t.trim();
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(t).map_err(|_| bad())
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse_int(p)?, q))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Integers print bare, everything else as `p/q` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A rational number or the max-plus zero `NEG_INF`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    NegInf,
    Finite(Rational),
}

impl ExtRational {
    pub fn zero() -> Self {
        ExtRational::Finite(Rational::zero())
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, ExtRational::NegInf)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::NegInf => None,
            ExtRational::Finite(r) => Some(r),
        }
    }

    /// Tropical addition.
    pub fn max(self, other: ExtRational) -> ExtRational {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

impl Add for &ExtRational {
    type Output = ExtRational;

    fn add(self, rhs: &ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::NegInf,
        }
    }
}

impl Add for ExtRational {
    type Output = ExtRational;

    fn add(self, rhs: ExtRational) -> ExtRational {
        &self + &rhs
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::NegInf, ExtRational::NegInf) => Ordering::Equal,
            (ExtRational::NegInf, _) => Ordering::Less,
            (_, ExtRational::NegInf) => Ordering::Greater,
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInf => f.write_str("-inf"),
            ExtRational::Finite(r) => f.write_str(&format_rational(r)),
        }
    }
}

impl FromStr for ExtRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("-inf") {
            Ok(ExtRational::NegInf)
        } else {
            parse_rational(t).map(ExtRational::Finite)
        }
    }
}
