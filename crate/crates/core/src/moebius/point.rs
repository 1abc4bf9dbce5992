use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::{AlgebraicReal, NumError, Rational};

/// A point of the real projective line. Infinity is its own variant and
/// sorts after every finite point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Finite(AlgebraicReal),
    Infinity,
}

impl ProjPoint {
    pub fn rational(r: Rational) -> Self {
        ProjPoint::Finite(r.into())
    }

    pub fn finite(&self) -> Option<&AlgebraicReal> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.finite().and_then(AlgebraicReal::as_rational)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }
}

impl From<AlgebraicReal> for ProjPoint {
    fn from(x: AlgebraicReal) -> Self {
        ProjPoint::Finite(x)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => x.fmt(f),
            ProjPoint::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ProjPoint {
    type Err = NumError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "∞" => Ok(ProjPoint::Infinity),
            t => Ok(ProjPoint::Finite(t.parse()?)),
        }
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}
