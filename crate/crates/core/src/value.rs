//! Exact extended rationals: finite p/q or +∞.
//!
//! These are the values taken by weighted relations and objectives. The
//! conventions are the extended-rational ones used throughout: `∞ + c = ∞`,
//! `c · ∞ = ∞` for every `c ≥ 0` (including `c = 0`), and every finite value
//! compares below `∞`. Multiplying `∞` by a negative value is undefined and
//! panics.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use crate::{Error, Result};

/// Canonical finite rational: lowest terms, positive denominator.
pub type Rational = num_rational::Ratio<i128>;

/// An exact extended rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Value {
    Finite(Rational),
    Infinite,
}

impl Value {
    pub fn zero() -> Self {
        Value::Finite(Rational::from_integer(0))
    }

    pub fn one() -> Self {
        Value::Finite(Rational::from_integer(1))
    }

    pub fn infinity() -> Self {
        Value::Infinite
    }

    pub fn from_int(n: i128) -> Self {
        Value::Finite(Rational::from_integer(n))
    }

    /// Builds `p/q`; fails on a zero denominator.
    pub fn ratio(p: i128, q: i128) -> Result<Self> {
        if q == 0 {
            return Err(Error::argument("zero denominator"));
        }
        Ok(Value::Finite(Rational::new(p, q)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Value::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Value::Finite(r) if r.numer() == &0)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Value::Finite(r) => Some(*r),
            Value::Infinite => None,
        }
    }

    /// Finite subtraction; `∞ − finite = ∞`. Subtracting `∞` panics.
    pub fn sub_finite(&self, rhs: &Value) -> Value {
        match (self, rhs) {
            (_, Value::Infinite) => panic!("cannot subtract an infinite value"),
            (Value::Infinite, _) => Value::Infinite,
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a - b),
        }
    }

    /// Exact non-negative integer power.
    pub fn pow(&self, exp: u32) -> Value {
        match self {
            Value::Infinite => {
                if exp == 0 {
                    Value::one()
                } else {
                    Value::Infinite
                }
            }
            Value::Finite(r) => {
                let mut acc = Rational::from_integer(1);
                for _ in 0..exp {
                    acc *= r;
                }
                Value::Finite(acc)
            }
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Finite(r)
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinite,
        }
    }
}

impl AddAssign for Value {
    fn add_assign(&mut self, rhs: Value) {
        *self = *self + rhs;
    }
}

impl Mul for Value {
    type Output = Value;
    /// `c · ∞ = ∞` for `c ≥ 0` (including 0); negative × ∞ panics.
    fn mul(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a * b),
            (Value::Finite(c), Value::Infinite) | (Value::Infinite, Value::Finite(c)) => {
                if c < Rational::from_integer(0) {
                    panic!("multiplying infinity by a negative value is undefined");
                }
                Value::Infinite
            }
            (Value::Infinite, Value::Infinite) => Value::Infinite,
        }
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        iter.fold(Value::zero(), |a, b| a + b)
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => a.cmp(b),
            (Value::Finite(_), Value::Infinite) => Ordering::Less,
            (Value::Infinite, Value::Finite(_)) => Ordering::Greater,
            (Value::Infinite, Value::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Infinite => write!(f, "inf"),
            Value::Finite(r) => {
                if r.denom() == &1 {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl FromStr for Value {
    type Err = Error;

    /// Accepts `inf`, `P`, or `P/Q` with integer `P` and positive-able `Q`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(Value::Infinite);
        }
        match s.split_once('/') {
            None => {
                let p: i128 = s
                    .parse()
                    .map_err(|_| Error::argument(format!("bad value literal `{s}`")))?;
                Ok(Value::from_int(p))
            }
            Some((p, q)) => {
                let p: i128 = p
                    .parse()
                    .map_err(|_| Error::argument(format!("bad numerator in `{s}`")))?;
                let q: i128 = q
                    .parse()
                    .map_err(|_| Error::argument(format!("bad denominator in `{s}`")))?;
                Value::ratio(p, q)
            }
        }
    }
}
