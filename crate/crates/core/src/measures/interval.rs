use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::MeasureError;
use crate::numerics::scalar::{parse_rational, Rational, Scalar};

/// Interval endpoint on the extended real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Endpoint {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Endpoint::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Endpoint::NegInf => f64::NEG_INFINITY,
            Endpoint::PosInf => f64::INFINITY,
            Endpoint::Finite(r) => r.to_f64(),
        }
    }

    fn rank(&self) -> i8 {
        match self {
            Endpoint::NegInf => -1,
            Endpoint::Finite(_) => 0,
            Endpoint::PosInf => 1,
        }
    }
}

impl PartialOrd for Endpoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Endpoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Endpoint::Finite(a), Endpoint::Finite(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => write!(f, "-inf"),
            Endpoint::PosInf => write!(f, "inf"),
            Endpoint::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl std::str::FromStr for Endpoint {
    type Err = MeasureError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "-inf" | "-infinity" => Ok(Endpoint::NegInf),
            "inf" | "+inf" | "infinity" => Ok(Endpoint::PosInf),
            t => Ok(Endpoint::Finite(parse_rational(t)?)),
        }
    }
}

impl Serialize for Endpoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = serde_json::Value::deserialize(d)?;
        let text = match raw {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("bad endpoint {other}"))),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Closed interval [a, b] on the extended real line, a < b.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "(Endpoint, Endpoint)", into = "(Endpoint, Endpoint)")]
pub struct Interval {
    a: Endpoint,
    b: Endpoint,
}

impl TryFrom<(Endpoint, Endpoint)> for Interval {
    type Error = MeasureError;
    fn try_from((a, b): (Endpoint, Endpoint)) -> Result<Self, Self::Error> {
        Interval::new(a, b)
    }
}

impl From<Interval> for (Endpoint, Endpoint) {
    fn from(i: Interval) -> Self {
        (i.a, i.b)
    }
}

impl Interval {
    pub fn new(a: Endpoint, b: Endpoint) -> Result<Self, MeasureError> {
        if a >= b || a == Endpoint::PosInf || b == Endpoint::NegInf {
            return Err(MeasureError::InvalidInterval(format!("[{a}, {b}]")));
        }
        Ok(Interval { a, b })
    }

    pub fn finite(a: Rational, b: Rational) -> Result<Self, MeasureError> {
        Self::new(Endpoint::Finite(a), Endpoint::Finite(b))
    }

    /// Convenience constructor from integer endpoints.
    pub fn from_ints(a: i64, b: i64) -> Result<Self, MeasureError> {
        Self::finite(Rational::from_integer(a.into()), Rational::from_integer(b.into()))
    }

    pub fn parse(a: &str, b: &str) -> Result<Self, MeasureError> {
        Self::new(a.parse()?, b.parse()?)
    }

    pub fn a(&self) -> &Endpoint {
        &self.a
    }

    pub fn b(&self) -> &Endpoint {
        &self.b
    }

    pub fn bounded(&self) -> bool {
        self.a.finite().is_some() && self.b.finite().is_some()
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        let e = Endpoint::Finite(x.clone());
        self.a <= e && e <= self.b
    }

    pub fn contains<T: Scalar>(&self, x: &T) -> bool {
        self.contains_rational(&x.to_rational_exact())
    }

    /// Length in f64 (infinite for unbounded intervals).
    pub fn length(&self) -> f64 {
        self.b.to_f64() - self.a.to_f64()
    }

    pub fn midpoint(&self) -> Option<Rational> {
        Some((self.a.finite()? + self.b.finite()?) / Rational::from_integer(2.into()))
    }

    /// Shared point of two intervals that touch, `Ok(None)` when disjoint,
    /// error when they overlap in more than one point.
    pub fn chain_with(&self, next: &Interval) -> Result<Option<Rational>, MeasureError> {
        let lo = std::cmp::max(&self.a, &next.a);
        let hi = std::cmp::min(&self.b, &next.b);
        match lo.cmp(hi) {
            Ordering::Greater => Ok(None),
            Ordering::Equal => Ok(lo.finite().cloned()),
            Ordering::Less => Err(MeasureError::Overlap(self.to_string(), next.to_string())),
        }
    }

    /// Euclidean distance between two intervals (0 if they meet).
    pub fn distance(&self, other: &Interval) -> f64 {
        let gap1 = other.a.to_f64() - self.b.to_f64();
        let gap2 = self.a.to_f64() - other.b.to_f64();
        gap1.max(gap2).max(0.0)
    }

    /// Distance from a complex point (f64) to the interval.
    pub fn distance_to_point(&self, re: f64, im: f64) -> f64 {
        let x = re.clamp(self.a.to_f64(), self.b.to_f64());
        (re - x).hypot(im)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}
